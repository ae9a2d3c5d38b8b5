import json
import subprocess
import sys

import pytest

from braidbrick.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out


def test_parse(capsys):
    code, out = run(capsys, "parse", "s1 s2 s1^2 s2^2 s1^2 s2^2")
    data = json.loads(out)
    assert code == 0
    assert data["tb"] == 7 and data["filling_genus"] == 4 and data["components"] == 1


def test_quiver_json_and_dot(capsys):
    code, out = run(capsys, "quiver", "s1^6 s2 s1^3 s2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["vertices"]) == 9
    assert data["recognized"] == ["E9/affine-E8"] and data["acyclic"]
    code, out = run(capsys, "quiver", "s1^2 s2^2", "--format", "dot")
    assert out.startswith("digraph Q {")


def test_render(capsys):
    code, out = run(capsys, "render", "s1^2 s2^2", "--no-arrows")
    assert code == 0 and out.count("|") == 4


def test_classify(capsys):
    code, out = run(capsys, "classify", "s1^3 s2 s1^3 s2")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "finite" and data["factors"] == [["E6"]]
    code, out = run(capsys, "classify", "s1^2 s2^2 s1^2 s2^2", "--format", "text")
    assert code == 0 and "infinite" in out


def test_classify_indeterminate_exit(capsys):
    code, _ = run(capsys, "classify", "s1^2 s2^2 s1^2 s2^2", "--cap", "1")
    assert code == 1


def test_classify_parallel_is_deterministic(capsys):
    words = ["s1^3 s2 s1^3 s2", "s1^2 s2^2 s1^2 s2^2", "s1^5", "s1 s2 s1 s2 s1 s2"]
    _, serial = run(capsys, "classify", *words, "--jobs", "1")
    _, parallel = run(capsys, "classify", *words, "--jobs", "3")
    assert serial == parallel
    assert [r["verdict"] for r in json.loads(serial)] == ["finite", "infinite", "finite", "finite"]


def test_dt_orbit(capsys):
    code, out = run(capsys, "dt-orbit", "s1^2 s2^2 s1^2 s2^2", "--iters", "50")
    data = json.loads(out)
    assert code == 0 and data["period"] is None and len(data["growth"]) == 51
    code, out = run(capsys, "dt-orbit", "s1^3 s2 s1^3 s2", "--format", "text")
    assert out.startswith("period: 14")


def test_dt_orbit_cyclic_is_error(capsys):
    code, _ = run(capsys, "dt-orbit", "s1^2 s2 s1^2 s2 s3^2 s2 s3^2 s2")
    assert code == 1


def test_fillings(capsys):
    code, out = run(capsys, "fillings", "s1^2 s2^2 s1^2 s2^2", "--m-max", "3")
    data = json.loads(out)
    assert code == 0 and data["pairwise_distinct"] and data["m_max"] == 3


def test_check_derivation(capsys, tmp_path):
    code, out = run(capsys, "check-derivation", "--seed-fixtures")
    assert code == 0 and all(r["ok"] for r in json.loads(out))
    bad = tmp_path / "bad.drv"
    bad.write_text("n=3 claim=isotopy\nword: s1 s2 s1\nstep R3 pos=0 -> s1 s2 s1\n")
    code, out = run(capsys, "check-derivation", str(bad), "--format", "text")
    assert code == 1 and "FAIL at step 0" in out
    broken = tmp_path / "broken.drv"
    broken.write_text("nonsense\n")
    code, _ = run(capsys, "check-derivation", str(broken))
    assert code == 1


def test_normal_form(capsys):
    code, out = run(capsys, "normal-form", "s1 s2 s1 s2", "--format", "text")
    assert code == 0 and out.strip() == "s1 s2 s1 | s2"


def test_tables(capsys):
    code, out = run(capsys, "standard-links", "--max-rank", "5")
    rows = json.loads(out)
    assert code == 0 and {"type": "E6", "n": 3, "word": "s1^3 s2 s1^3 s2", "components": 1} in rows
    code, out = run(capsys, "component-table")
    assert code == 0 and all(r["ok"] for r in json.loads(out))


@pytest.mark.parametrize(
    "argv",
    [
        ["parse", "s1^x"],
        ["quiver", "s1", "--n", "1"],
        ["dt-orbit", "s1^2", "--iters", "0"],
        ["fillings", "s1^2", "--m-max", "-1"],
        ["quiver", "s1", "--format", "yaml"],
        ["check-derivation"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_jobs_env(monkeypatch):
    monkeypatch.setenv("BRAIDBRICK_JOBS", "3")
    args = build_parser().parse_args(["classify", "s1"])
    assert args.jobs == 3


def test_console_script_is_byte_identical():
    cmd = [sys.executable, "-m", "braidbrick.cli", "quiver", "s1^2 s2^2 s1^2 s2^2"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["types"] == ["affine-D5"]
