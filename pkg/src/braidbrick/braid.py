"""Positive braid words, the elementary rewrite moves, and closure arithmetic.

Generator indices are 1-based everywhere in the public interface: the letter
``i`` stands for the Artin generator ``s_i`` crossing strands ``i`` and
``i + 1``.  Word positions, on the other hand, are 0-based Python indices.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

__all__ = [
    "BraidError",
    "BraidWord",
    "Permutation",
    "parse_braid",
    "format_braid",
    "cyclic_rotate",
    "r3_move",
    "commute_move",
    "markov_destabilize",
    "delete_letters",
    "opposite",
    "apply_move",
    "mirror",
    "connect_sum",
    "split_union",
    "subword_range",
    "shift",
    "permutation",
    "components",
    "tb",
    "filling_b1",
    "filling_genus",
]


class BraidError(ValueError):
    """Raised for malformed braid text or an inapplicable move."""


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.n < 2:
            raise BraidError(f"strand count must be >= 2, got {self.n}")
        for x in self.letters:
            if not 1 <= x <= self.n - 1:
                raise BraidError(f"letter s{x} out of range for {self.n} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self) -> str:
        return format_braid(self)

    def count(self, i: int) -> int:
        return self.letters.count(i)

    def with_letters(self, letters: Iterable[int], n: int | None = None) -> "BraidWord":
        return BraidWord(self.n if n is None else n, tuple(letters))

    def to_json(self) -> dict:
        return {"n": self.n, "letters": list(self.letters)}

    @classmethod
    def from_json(cls, data: dict | str) -> "BraidWord":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), tuple(data["letters"]))


_TOKEN = re.compile(r"s_?\{?(\d+)\}?(?:\^\{?(\d+)\}?)?")


def parse_braid(text: str, n_override: int | None = None) -> BraidWord:
    """Parse braid text such as ``"s1^3 s2 s1^3 s2"`` or the compact ``"1112"``.

    Tokens are ``s<i>`` with an optional ``^<k>`` exponent; the TeX-ish
    spellings ``s_1`` and ``s_1^{3}`` are accepted too.  A JSON object
    ``{"n": .., "letters": [..]}`` is also understood.  Without
    ``n_override`` the strand count is ``1 + max index`` (at least 2).
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        word = BraidWord.from_json(stripped)
        if n_override is not None and n_override != word.n:
            word = BraidWord(n_override, word.letters)
        return word

    letters: list[int] = []
    if stripped and stripped.isdigit():
        letters = [int(ch) for ch in stripped]
        if 0 in letters:
            raise BraidError("compact form cannot contain generator index 0")
    else:
        pos = 0
        while pos < len(stripped):
            if stripped[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(stripped, pos)
            if m is None:
                raise BraidError(f"malformed token at {stripped[pos:pos + 12]!r}")
            idx = int(m.group(1))
            exp = int(m.group(2)) if m.group(2) is not None else 1
            if idx < 1:
                raise BraidError("generator index must be >= 1")
            if exp < 1:
                raise BraidError("exponent must be >= 1")
            letters.extend([idx] * exp)
            pos = m.end()

    if n_override is not None:
        bad = [x for x in letters if x >= n_override]
        if bad:
            raise BraidError(f"index s{max(bad)} does not fit on {n_override} strands")
        return BraidWord(n_override, tuple(letters))
    n = max(2, max(letters, default=0) + 1)
    logger.warning("strand count inferred as n=%d; pass n_override to pin it", n)
    return BraidWord(n, tuple(letters))


def format_braid(w: BraidWord | Sequence[int], compact: bool = False) -> str:
    """Render letters as ``s1^3 s2 ...``; the empty word renders as ``""``."""
    letters = w.letters if isinstance(w, BraidWord) else tuple(w)
    if compact:
        return "".join(str(x) for x in letters)
    out: list[str] = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        run = j - i
        out.append(f"s{letters[i]}" + (f"^{run}" if run > 1 else ""))
        i = j
    return " ".join(out)


# ---------------------------------------------------------------------------
# rewrite moves


def cyclic_rotate(w: BraidWord, k: int) -> BraidWord:
    """Rotate letters left by ``k`` (negative ``k`` rotates right)."""
    if not w.letters:
        return w
    k %= len(w.letters)
    return w.with_letters(w.letters[k:] + w.letters[:k])


def r3_move(w: BraidWord, pos: int) -> BraidWord:
    """Swap ``s_i s_j s_i`` for ``s_j s_i s_j`` (``|i - j| = 1``) starting at ``pos``."""
    a = w.letters
    if pos < 0 or pos + 2 >= len(a):
        raise BraidError(f"R3 at {pos}: needs three letters")
    i, j, k = a[pos], a[pos + 1], a[pos + 2]
    if not (i == k and abs(i - j) == 1):
        raise BraidError(f"R3 at {pos}: s{i} s{j} s{k} is not a braid-relation side")
    return w.with_letters(a[:pos] + (j, i, j) + a[pos + 3:])


def commute_move(w: BraidWord, pos: int) -> BraidWord:
    """Swap the far-commuting letters at ``pos`` and ``pos + 1``."""
    a = w.letters
    if pos < 0 or pos + 1 >= len(a):
        raise BraidError(f"commutation at {pos}: needs two letters")
    if abs(a[pos] - a[pos + 1]) < 2:
        raise BraidError(f"commutation at {pos}: s{a[pos]} and s{a[pos + 1]} do not commute")
    return w.with_letters(a[:pos] + (a[pos + 1], a[pos]) + a[pos + 2:])


def markov_destabilize(w: BraidWord) -> BraidWord | None:
    """Delete a lone ``s_{n-1}`` (preferred) or a lone ``s_1``; ``None`` otherwise.

    Deleting ``s_1`` shifts every remaining index down by one.  Two-strand
    words are never destabilized since the result would have one strand.
    """
    if w.n <= 2:
        return None
    top = w.n - 1
    if w.letters.count(top) == 1:
        return BraidWord(w.n - 1, tuple(x for x in w.letters if x != top))
    if w.letters.count(1) == 1:
        return BraidWord(w.n - 1, tuple(x - 1 for x in w.letters if x != 1))
    return None


def delete_letters(w: BraidWord, positions: Iterable[int]) -> BraidWord:
    drop = set(positions)
    for p in drop:
        if not 0 <= p < len(w.letters):
            raise BraidError(f"delete: position {p} out of range")
    return w.with_letters(x for p, x in enumerate(w.letters) if p not in drop)


def opposite(w: BraidWord) -> BraidWord:
    return w.with_letters(reversed(w.letters))


def mirror(w: BraidWord) -> BraidWord:
    """Flip the strand order: ``s_i`` becomes ``s_{n-i}``."""
    return w.with_letters(w.n - x for x in w.letters)


def apply_move(w: BraidWord, move: str, **params) -> BraidWord:
    """Apply one named move: ``R1``, ``R3``/``c`` (``pos``), ``rho`` (``k``),
    ``delete`` (``positions``) or ``oppo``.
    """
    if move == "R1":
        out = markov_destabilize(w)
        if out is None:
            raise BraidError("R1: no lone s_1 or s_{n-1} to delete")
        return out
    if move == "R3":
        return r3_move(w, int(params["pos"]))
    if move == "c":
        return commute_move(w, int(params["pos"]))
    if move == "rho":
        return cyclic_rotate(w, int(params.get("k", 1)))
    if move == "delete":
        return delete_letters(w, params["positions"])
    if move == "oppo":
        return opposite(w)
    raise BraidError(f"unknown move {move!r}")


# ---------------------------------------------------------------------------
# assembling and slicing


def shift(w: BraidWord, k: int, n: int) -> BraidWord:
    """Return ``w`` with every index moved by ``k``, on ``n`` strands."""
    return BraidWord(n, tuple(x + k for x in w.letters))


def connect_sum(w1: BraidWord, w2: BraidWord) -> BraidWord:
    n = w1.n + w2.n - 1
    return BraidWord(n, w1.letters + tuple(x + w1.n - 1 for x in w2.letters))


def split_union(w1: BraidWord, w2: BraidWord) -> BraidWord:
    n = w1.n + w2.n
    return BraidWord(n, w1.letters + tuple(x + w1.n for x in w2.letters))


def subword_range(w: BraidWord, i: int, j: int, reindex: bool = False) -> BraidWord:
    """Letters with index in ``[i, j]``, order kept; optionally moved down to ``s_1``."""
    if not 1 <= i <= j <= w.n - 1:
        raise BraidError(f"invalid level range ({i}, {j}) for {w.n} strands")
    kept = tuple(x for x in w.letters if i <= x <= j)
    if reindex:
        return BraidWord(j - i + 2, tuple(x - i + 1 for x in kept))
    return w.with_letters(kept)


# ---------------------------------------------------------------------------
# closure arithmetic


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{1..n}``; ``images[k - 1]`` is the image of ``k``."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, len(self.images) + 1):
            if start in seen:
                continue
            cyc = []
            k = start
            while k not in seen:
                seen.add(k)
                cyc.append(k)
                k = self.images[k - 1]
            out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1


def permutation(w: BraidWord) -> Permutation:
    """Underlying permutation: strand starting at position k ends at ``images[k-1]``."""
    pos = list(range(w.n))  # pos[position] = strand label
    for x in w.letters:
        pos[x - 1], pos[x] = pos[x], pos[x - 1]
    images = [0] * w.n
    for p, strand in enumerate(pos):
        images[strand] = p + 1
    return Permutation(tuple(images))


def components(w: BraidWord) -> int:
    return len(permutation(w).cycles())


def tb(w: BraidWord) -> int:
    return len(w.letters) - w.n


def filling_b1(w: BraidWord) -> int:
    return len(w.letters) - w.n + 1


def filling_genus(w: BraidWord) -> int:
    """Genus of an exact filling of the rainbow closure; knots only."""
    if components(w) != 1:
        raise BraidError("filling genus is only defined here for knots (1 component)")
    return (tb(w) + 1) // 2
