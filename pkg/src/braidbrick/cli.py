"""Command-line front end.

Every subcommand prints JSON by default; ``--format text`` gives a human
summary and ``quiver --format dot`` a Graphviz digraph.  Exit status is 0 on
success, 1 on a computation error or an indeterminate verdict, and 2 on a
usage error (bad flags or unparsable braid text).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

from .braid import BraidError, BraidWord, components, filling_genus, format_braid, parse_braid, permutation, tb
from .bricks import extract_quiver, quiver_matrix, render_ascii
from .classify import classify, component_table_check, standard_link
from .cluster import ClusterError, dt_orbit, filling_seeds
from .derivations import DerivationError, check_corpus, corpus_paths
from .normal_form import greedy_normal_form
from .quiver import DynkinType, is_acyclic, recognize

logger = logging.getLogger(__name__)

# affine E8 is the E_{r+3} quiver of s1^r s2 s1^3 s2 at r = 6
_ALIASES = {"affine-E8": "E9/affine-E8"}


class UsageError(Exception):
    pass


def _jobs_default() -> int:
    raw = os.environ.get("BRAIDBRICK_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _word(text: str, n: int | None) -> BraidWord:
    try:
        return parse_braid(text, n_override=n)
    except BraidError as exc:
        raise UsageError(f"cannot parse braid {text!r}: {exc}") from exc


def _emit(obj, fmt: str, text: Callable[[], str]) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        print(text())


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args) -> int:
    w = _word(args.word, args.n)
    out = {
        "n": w.n,
        "letters": list(w.letters),
        "text": format_braid(w),
        "length": len(w),
        "permutation": list(permutation(w).images),
        "components": components(w),
        "tb": tb(w),
    }
    if out["components"] == 1:
        out["filling_genus"] = filling_genus(w)
    _emit(out, args.format, lambda: "\n".join(f"{k}: {v}" for k, v in out.items()))
    return 0


def cmd_quiver(args) -> int:
    w = _word(args.word, args.n)
    q = extract_quiver(w)
    B = q.matrix()
    if args.format == "dot":
        print(q.to_dot())
        return 0
    types = [str(t) for t in recognize(B)]
    out = {
        "word": format_braid(w),
        "n": w.n,
        **q.to_json(),
        "acyclic": is_acyclic(B),
        "types": types,
        "recognized": [_ALIASES.get(t, t) for t in types],
    }
    _emit(out, args.format, lambda: render_ascii(w) + "\ntypes: " + ", ".join(types))
    return 0


def cmd_render(args) -> int:
    w = _word(args.word, args.n)
    art = render_ascii(w, show_arrows=not args.no_arrows)
    _emit({"word": format_braid(w), "ascii": art}, args.format, lambda: art)
    return 0


def _classify_one(text: str, n: int | None, cap: int) -> dict:
    return classify(parse_braid(text, n_override=n), cap=cap).to_json()


def cmd_classify(args) -> int:
    for text in args.word:
        _word(text, args.n)
    if args.jobs > 1 and len(args.word) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_classify_one, args.word, [args.n] * len(args.word), [args.cap] * len(args.word)))
    else:
        results = [_classify_one(t, args.n, args.cap) for t in args.word]

    def text() -> str:
        lines = []
        for r in results:
            line = f"{r['word']}: {r['verdict']}"
            if r["verdict"] == "finite":
                line += f" unknots={r['unknots']} factors={r['factors']}"
            elif r.get("witness"):
                line += f" witness={r['witness']['family']}"
            lines.append(line)
        return "\n".join(lines)

    _emit(results[0] if len(results) == 1 else results, args.format, text)
    return 1 if any(r["verdict"] == "indeterminate" for r in results) else 0


def cmd_dt_orbit(args) -> int:
    w = _word(args.word, args.n)
    rep = dt_orbit(quiver_matrix(w), max_iter=args.iters)
    out = {"word": format_braid(w), **rep.to_json()}

    def text() -> str:
        head = f"period: {rep.period}" if rep.period else f"no period within {rep.iterations} iterations"
        rows = [f"{i:4d} {nb:8d} {db:8d}" for i, (nb, db) in enumerate(rep.growth)]
        return "\n".join([head, "iter num_bits den_bits", *rows])

    _emit(out, args.format, text)
    return 0


def cmd_fillings(args) -> int:
    w = _word(args.word, args.n)
    fs = filling_seeds(w, args.m_max)
    out = {"word": format_braid(w), **fs.to_json()}

    def text() -> str:
        if fs.pairwise_distinct:
            return f"{len(fs.seeds)} pairwise distinct seeds"
        return f"seeds {fs.repeat[0]} and {fs.repeat[1]} coincide"

    _emit(out, args.format, text)
    return 0


def cmd_check_derivation(args) -> int:
    paths = list(args.files)
    if args.seed_fixtures:
        paths += [str(p) for p in corpus_paths()]
    if not paths:
        raise UsageError("give derivation files or --seed-fixtures")
    try:
        results = check_corpus(paths, jobs=args.jobs)
    except (DerivationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = [{"name": name, **r.to_json()} for name, r in results]

    def text() -> str:
        return "\n".join(
            f"{o['name']}: " + (f"ok ({o['relation']})" if o["ok"] else f"FAIL at step {o['step']}: {o['reason']}")
            for o in out
        )

    _emit(out, args.format, text)
    return 0 if all(r.ok for _, r in results) else 1


def cmd_normal_form(args) -> int:
    w = _word(args.word, args.n)
    nf = greedy_normal_form(w)
    factors = [format_braid(f) for f in nf.words()]
    out = {"word": format_braid(w), "n": w.n, "factors": factors, "normal_form": format_braid(nf.to_word())}
    _emit(out, args.format, lambda: " | ".join(factors))
    return 0


def _table_types(max_rank: int) -> list[DynkinType]:
    types = [DynkinType("A", r) for r in range(1, max_rank + 1)]
    types += [DynkinType("D", r) for r in range(4, max_rank + 1)]
    types += [DynkinType("E", r) for r in (6, 7, 8)]
    return types


def cmd_standard_links(args) -> int:
    rows = []
    for t in _table_types(args.max_rank):
        s = standard_link(t)
        rows.append({"type": str(t), "n": s.word.n, "word": format_braid(s.word), "components": components(s.word)})
    _emit(rows, args.format, lambda: "\n".join(f"{r['type']:>4}  {r['word']}" for r in rows))
    return 0


def cmd_component_table(args) -> int:
    rows = component_table_check(args.max_rank)
    out = [{"type": r.type, "components": r.components, "expected": r.expected, "ok": r.ok} for r in rows]
    _emit(
        out,
        args.format,
        lambda: "\n".join(f"{r.type:>4}  {r.components}  {'ok' if r.ok else 'MISMATCH'}" for r in rows),
    )
    return 0 if all(r.ok for r in rows) else 1


# ---------------------------------------------------------------------------
# argument parsing


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return v


def _nonnegative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 0")
    return v


def _strands(text: str) -> int:
    v = _positive(text)
    if v < 2:
        raise argparse.ArgumentTypeError("--n must be >= 2")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_strands, default=None, help="strand count (default: 1 + largest index)")
    common.add_argument("--cap", type=_positive, default=100_000, help="mutation-class node cap")
    common.add_argument("--jobs", type=_positive, default=_jobs_default(), help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true", help="log warnings to stderr")

    def fmt(p: argparse.ArgumentParser, choices=("json", "text"), default="json") -> None:
        p.add_argument("--format", choices=choices, default=default)

    parser = argparse.ArgumentParser(prog="braidbrick", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse a braid word")
    p.add_argument("word")
    fmt(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("quiver", parents=[common], help="brick quiver of a word")
    p.add_argument("word")
    fmt(p, ("json", "text", "dot"))
    p.set_defaults(func=cmd_quiver)

    p = sub.add_parser("render", parents=[common], help="ASCII brick diagram")
    p.add_argument("word")
    p.add_argument("--no-arrows", action="store_true")
    fmt(p, default="text")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("classify", parents=[common], help="finite/infinite verdict with certificate")
    p.add_argument("word", nargs="+")
    fmt(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("dt-orbit", parents=[common], help="DT orbit of the unit frieze point")
    p.add_argument("word")
    p.add_argument("--iters", type=_positive, default=64)
    fmt(p)
    p.set_defaults(func=cmd_dt_orbit)

    p = sub.add_parser("fillings", parents=[common], help="seeds of the fillings L_0..L_m")
    p.add_argument("word")
    p.add_argument("--m-max", type=_nonnegative, default=10)
    fmt(p)
    p.set_defaults(func=cmd_fillings)

    p = sub.add_parser("check-derivation", parents=[common], help="check rewrite-chain files")
    p.add_argument("files", nargs="*")
    p.add_argument("--seed-fixtures", action="store_true", help="also check the shipped corpus")
    fmt(p)
    p.set_defaults(func=cmd_check_derivation)

    p = sub.add_parser("normal-form", parents=[common], help="left greedy normal form")
    p.add_argument("word")
    fmt(p)
    p.set_defaults(func=cmd_normal_form)

    for name, func, help_text in (
        ("standard-links", cmd_standard_links, "table of standard ADE words"),
        ("component-table", cmd_component_table, "component counts of the standard links"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--max-rank", type=_positive, default=12)
        fmt(p)
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR, stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (BraidError, ClusterError, DerivationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
