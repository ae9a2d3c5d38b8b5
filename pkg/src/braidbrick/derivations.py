"""Mechanical checking of braid rewrite chains.

A derivation starts from a braid word and lists rewrite steps, each with
the word it claims to produce.  The checker replays every step through the
braid moves and compares words exactly.  ``eq`` steps may jump to any word
equal in the positive braid monoid; they are confirmed with the greedy
normal form.  A chain containing a ``delete`` step relates its endpoints by
dominance, otherwise by isotopy.

Text format, one item per line (``#`` starts a comment)::

    name: <identifier>                 optional
    note: <free text>                  optional, repeatable
    params: a3=2 b2=1                  optional, exponents used to instantiate
    n=<int> claim=<isotopy|dominance>
    word: <braid text>
    step <move> [key=value ...] [; <move> [key=value ...]]* -> <braid text>

Moves are ``R1``, ``R3 pos=P``, ``c pos=P``, ``rho k=K``,
``delete positions=P1,P2,..``, ``oppo`` and ``eq``.  A line with several
``;``-separated moves is a macro: its inner moves are replayed in order and
only the final word is compared.  Braid text after ``->`` is read on the
strand count current at that step (``R1`` lowers it by one).

The same content is accepted as JSON::

    {"name": .., "n": 4, "claim": "isotopy", "word": "s1 s2 ..",
     "steps": [{"moves": [{"move": "R3", "pos": 2}], "result": ".."}]}
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .braid import BraidError, BraidWord, apply_move, format_braid, parse_braid
from .normal_form import monoid_equal

__all__ = [
    "MOVES",
    "DerivationError",
    "DerivationStep",
    "Derivation",
    "CheckResult",
    "parse_derivation",
    "load_derivation",
    "compose_relation",
    "check",
    "expand",
    "endpoint_quiver_report",
    "corpus_paths",
    "load_corpus",
    "check_corpus",
]

MOVES = ("R1", "R3", "rho", "c", "delete", "oppo", "eq")
ISOTOPY = "isotopy"
DOMINANCE = "dominance"
_INT_PARAMS = {"R3": ("pos",), "c": ("pos",), "rho": ("k",)}


class DerivationError(ValueError):
    """Raised for malformed derivation text or JSON."""


@dataclass(frozen=True)
class DerivationStep:
    """One primitive move.

    ``result`` is ``None`` for the inner moves of a macro line; ``line``
    is the index of the displayed step the move belongs to.
    """

    move: str
    params: tuple[tuple[str, object], ...] = ()
    result: BraidWord | None = None
    line: int = 0

    @property
    def kwargs(self) -> dict:
        return dict(self.params)

    def describe(self) -> str:
        parts = [self.move]
        for key, val in self.params:
            if isinstance(val, tuple):
                val = ",".join(str(v) for v in val)
            parts.append(f"{key}={val}")
        return " ".join(parts)


@dataclass(frozen=True)
class Derivation:
    start: BraidWord
    steps: tuple[DerivationStep, ...]
    claimed: str
    name: str = ""
    notes: tuple[str, ...] = ()
    params: tuple[tuple[str, int], ...] = ()

    @property
    def lines(self) -> int:
        return 1 + max((s.line for s in self.steps), default=-1)

    def to_json(self) -> dict:
        groups: list[dict] = []
        for s in self.steps:
            if s.line == len(groups):
                groups.append({"moves": [], "result": None})
            move = {"move": s.move}
            move.update({k: list(v) if isinstance(v, tuple) else v for k, v in s.params})
            groups[s.line]["moves"].append(move)
            if s.result is not None:
                groups[s.line]["result"] = format_braid(s.result)
        return {
            "name": self.name,
            "notes": list(self.notes),
            "params": dict(self.params),
            "n": self.start.n,
            "claim": self.claimed,
            "word": format_braid(self.start),
            "steps": groups,
        }

    def to_text(self) -> str:
        out = []
        if self.name:
            out.append(f"name: {self.name}")
        out.extend(f"note: {t}" for t in self.notes)
        if self.params:
            out.append("params: " + " ".join(f"{k}={v}" for k, v in self.params))
        out.append(f"n={self.start.n} claim={self.claimed}")
        out.append(f"word: {format_braid(self.start)}")
        line: list[str] = []
        for s in self.steps:
            line.append(s.describe())
            if s.result is not None:
                out.append(f"step {'; '.join(line)} -> {format_braid(s.result)}")
                line = []
        return "\n".join(out) + "\n"


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    relation: str | None
    step: int | None = None  # index into Derivation.steps of the first failure
    line: int | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {"ok": self.ok, "relation": self.relation, "step": self.step, "line": self.line, "reason": self.reason}


# ---------------------------------------------------------------------------
# parsing


def _parse_params(move: str, tokens: Iterable[tuple[str, object]]) -> tuple[tuple[str, object], ...]:
    if move not in MOVES:
        raise DerivationError(f"unknown move {move!r}")
    params: dict[str, object] = {}
    for key, val in tokens:
        try:
            if move == "delete" and key == "positions":
                if isinstance(val, str):
                    val = [v for v in val.split(",") if v]
                params[key] = tuple(int(v) for v in val)
            elif key in _INT_PARAMS.get(move, ()):
                params[key] = int(val)
            else:
                raise DerivationError(f"move {move} takes no parameter {key!r}")
        except (TypeError, ValueError) as exc:
            if isinstance(exc, DerivationError):
                raise
            raise DerivationError(f"move {move}: bad value for {key}: {val!r}") from exc
    for key in _INT_PARAMS.get(move, ()):
        if key not in params and not (move == "rho" and key == "k"):
            raise DerivationError(f"move {move} needs {key}=")
    if move == "delete" and "positions" not in params:
        raise DerivationError("move delete needs positions=")
    return tuple(sorted(params.items()))


def _parse_move_text(text: str) -> tuple[str, tuple[tuple[str, object], ...]]:
    tokens = text.split()
    if not tokens:
        raise DerivationError("empty move in step")
    pairs = []
    for tok in tokens[1:]:
        if "=" not in tok:
            raise DerivationError(f"parameter {tok!r} is not key=value")
        key, val = tok.split("=", 1)
        pairs.append((key, val))
    return tokens[0], _parse_params(tokens[0], pairs)


def _group_steps(groups: Sequence[tuple[list[tuple[str, tuple]], str]], n: int) -> tuple[DerivationStep, ...]:
    steps: list[DerivationStep] = []
    for line, (moves, result_text) in enumerate(groups):
        if not moves:
            raise DerivationError(f"step {line} has no move")
        for i, (move, params) in enumerate(moves):
            if move == "R1":
                n -= 1
            result = None
            if i == len(moves) - 1:
                try:
                    result = parse_braid(result_text, n_override=n)
                except BraidError as exc:
                    raise DerivationError(f"step {line}: {exc}") from exc
            steps.append(DerivationStep(move, params, result, line))
    return tuple(steps)


def _header_int(key: str, val: str) -> int:
    try:
        return int(val)
    except ValueError as exc:
        raise DerivationError(f"header {key}= needs an integer, got {val!r}") from exc


def parse_derivation(text: str) -> Derivation:
    """Parse the line-oriented text form, or its JSON mirror."""
    if text.lstrip().startswith("{"):
        return _from_json(json.loads(text))
    name, notes, params = "", [], []
    n = claim = start = None
    groups: list[tuple[list, str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("name:"):
            name = line[5:].strip()
        elif line.startswith("note:"):
            notes.append(line[5:].strip())
        elif line.startswith("params:"):
            for tok in line[7:].split():
                key, _, val = tok.partition("=")
                params.append((key, _header_int(key, val)))
        elif line.startswith("word:"):
            if n is None:
                raise DerivationError("header n=.. claim=.. must precede word:")
            start = parse_braid(line[5:], n_override=n)
        elif line.startswith("step "):
            if start is None:
                raise DerivationError("step before word:")
            body, arrow, result = line[5:].partition("->")
            if not arrow:
                raise DerivationError(f"step without '->': {line!r}")
            groups.append(([_parse_move_text(m) for m in body.split(";")], result.strip()))
        elif line.startswith("n="):
            for tok in line.split():
                key, _, val = tok.partition("=")
                if key == "n":
                    n = _header_int(key, val)
                elif key == "claim":
                    claim = val
                else:
                    raise DerivationError(f"unknown header field {key!r}")
        else:
            raise DerivationError(f"unrecognized line {raw!r}")
    if start is None or claim is None:
        raise DerivationError("derivation needs a header and a word: line")
    if claim not in (ISOTOPY, DOMINANCE):
        raise DerivationError(f"claim must be isotopy or dominance, got {claim!r}")
    return Derivation(start, _group_steps(groups, start.n), claim, name, tuple(notes), tuple(params))


def _from_json(data: dict) -> Derivation:
    try:
        n = int(data["n"])
        claim = data["claim"]
        start = parse_braid(data["word"], n_override=n)
        groups = []
        for g in data.get("steps", []):
            moves = []
            for m in g["moves"]:
                m = dict(m)
                move = m.pop("move")
                moves.append((move, _parse_params(move, m.items())))
            groups.append((moves, g["result"]))
    except (KeyError, TypeError) as exc:
        raise DerivationError(f"malformed derivation JSON: {exc}") from exc
    if claim not in (ISOTOPY, DOMINANCE):
        raise DerivationError(f"claim must be isotopy or dominance, got {claim!r}")
    params = tuple((str(k), int(v)) for k, v in data.get("params", {}).items())
    return Derivation(
        start, _group_steps(groups, n), claim, data.get("name", ""), tuple(data.get("notes", ())), params
    )


def load_derivation(path: str | os.PathLike) -> Derivation:
    d = parse_derivation(Path(path).read_text())
    if not d.name:
        d = Derivation(d.start, d.steps, d.claimed, Path(path).stem, d.notes, d.params)
    return d


# ---------------------------------------------------------------------------
# checking


def compose_relation(steps: Iterable[DerivationStep | str]) -> str:
    """Dominance as soon as any letter is deleted; every other move is an isotopy."""
    moves = (s if isinstance(s, str) else s.move for s in steps)
    return DOMINANCE if any(m == "delete" for m in moves) else ISOTOPY


def _replay(cur: BraidWord, step: DerivationStep) -> BraidWord:
    if step.move == "eq":
        if step.result is None:
            raise BraidError("eq needs an explicit result word")
        if step.result.n != cur.n or not monoid_equal(cur, step.result):
            raise BraidError(
                f"eq: {format_braid(cur)} and {format_braid(step.result)} differ in the braid monoid"
            )
        return step.result
    return apply_move(cur, step.move, **step.kwargs)


def check(d: Derivation) -> CheckResult:
    """Replay every step and compare the composite relation with the claim."""
    cur = d.start
    for idx, step in enumerate(d.steps):
        try:
            nxt = _replay(cur, step)
        except (BraidError, KeyError, TypeError) as exc:
            return CheckResult(False, None, idx, step.line, f"malformed move {step.describe()}: {exc}")
        if step.result is not None and nxt != step.result:
            return CheckResult(
                False,
                None,
                idx,
                step.line,
                f"step mismatch at {step.describe()}: replay gives {format_braid(nxt)} (n={nxt.n}), "
                f"claimed {format_braid(step.result)} (n={step.result.n})",
            )
        cur = nxt
    relation = compose_relation(d.steps)
    if relation != d.claimed:
        return CheckResult(False, relation, None, None, f"relation mismatch: chain is {relation}, claimed {d.claimed}")
    return CheckResult(True, relation)


def expand(d: Derivation) -> tuple[BraidWord, ...]:
    """Every intermediate word of a checked derivation, start included."""
    words = [d.start]
    for step in d.steps:
        words.append(_replay(words[-1], step))
    return tuple(words)


def _word_report(w: BraidWord, cap: int) -> dict:
    from .bricks import quiver_matrix
    from .quiver import is_acyclic, is_finite_type, recognize

    B = quiver_matrix(w)
    types = recognize(B)
    out = {
        "word": format_braid(w),
        "n": w.n,
        "vertices": B.size,
        "acyclic": is_acyclic(B),
        "types": [str(t) for t in types],
    }
    if out["acyclic"]:
        # an acyclic quiver is of finite type exactly when its graph is Dynkin
        out["verdict"] = "finite" if all(t.finite for t in types) else "infinite"
        out["mutation_types"] = out["types"] if out["verdict"] == "finite" else []
    else:
        verdict = is_finite_type(B, cap=cap)
        out["verdict"] = verdict.status
        out["mutation_types"] = [str(t) for t in verdict.types]
    return out


def endpoint_quiver_report(d: Derivation, cap: int = 100_000) -> dict:
    """Brick-quiver summary of the first and last word of a valid chain."""
    res = check(d)
    if not res.ok:
        raise DerivationError(f"derivation {d.name or '?'} does not check: {res.reason}")
    words = expand(d)
    return {"name": d.name, "relation": res.relation, "start": _word_report(words[0], cap),
            "end": _word_report(words[-1], cap)}


# ---------------------------------------------------------------------------
# shipped corpus


def corpus_paths() -> list[Path]:
    root = resources.files("braidbrick") / "fixtures" / "derivations"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith((".drv", ".json")))


def load_corpus() -> list[Derivation]:
    return [load_derivation(p) for p in corpus_paths()]


def _check_path(path: str) -> tuple[str, CheckResult]:
    d = load_derivation(path)
    return d.name, check(d)


def check_corpus(paths: Sequence[str | os.PathLike] | None = None, jobs: int = 1) -> list[tuple[str, CheckResult]]:
    """Check each file; results come back in path order whatever ``jobs`` is."""
    items = [str(p) for p in (corpus_paths() if paths is None else paths)]
    if jobs <= 1 or len(items) <= 1:
        return [_check_path(p) for p in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_check_path, items))
