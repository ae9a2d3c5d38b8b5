"""Left-greedy normal form in the positive braid monoid.

A simple element (a divisor of the half twist) is stored as the tuple
``arr`` with ``arr[p]`` the strand label sitting at position ``p`` after
the crossings have been performed, starting from the identity
``(0, 1, ..., n - 1)``.  For a simple braid every pair of strands crosses at
most once, so the two descent sets are read off directly:

* right descents ``{i : arr[i-1] > arr[i]}`` -- letters ``s_i`` the factor
  can end with;
* left descents ``{i : inv[i-1] > inv[i]}`` -- letters it can start with.
"""

from __future__ import annotations

from dataclasses import dataclass

from .braid import BraidError, BraidWord

Simple = tuple[int, ...]


def _identity(n: int) -> list[int]:
    return list(range(n))


def _right_descents(arr: Simple) -> set[int]:
    return {i for i in range(1, len(arr)) if arr[i - 1] > arr[i]}


def _left_descents(arr: Simple) -> set[int]:
    inv = [0] * len(arr)
    for p, s in enumerate(arr):
        inv[s] = p
    return {i for i in range(1, len(arr)) if inv[i - 1] > inv[i]}


def _times_gen(arr: list[int], i: int) -> None:
    arr[i - 1], arr[i] = arr[i], arr[i - 1]


def _strip_left_gen(arr: list[int], i: int) -> None:
    # s_i^{-1} * A relabels strands i-1 and i
    a, b = i - 1, i
    for p, s in enumerate(arr):
        if s == a:
            arr[p] = b
        elif s == b:
            arr[p] = a


def simple_word(arr: Simple) -> tuple[int, ...]:
    """A positive word (1-based letters) for the simple element ``arr``."""
    cur = list(arr)
    out: list[int] = []
    # peel right descents off the end
    while True:
        desc = _right_descents(tuple(cur))
        if not desc:
            break
        i = min(desc)
        _times_gen(cur, i)
        out.append(i)
    return tuple(reversed(out))


@dataclass(frozen=True)
class GreedyNormalForm:
    n: int
    factors: tuple[Simple, ...]

    def words(self) -> list[tuple[int, ...]]:
        return [simple_word(f) for f in self.factors]

    def to_word(self) -> BraidWord:
        return BraidWord(self.n, tuple(x for f in self.factors for x in simple_word(f)))


def _make_left_weighted(a: list[int], b: list[int]) -> bool:
    changed = False
    while True:
        moves = _left_descents(tuple(b)) - _right_descents(tuple(a))
        if not moves:
            return changed
        i = min(moves)
        _times_gen(a, i)
        _strip_left_gen(b, i)
        changed = True


def greedy_normal_form(w: BraidWord) -> GreedyNormalForm:
    """Left-greedy factorization of the monoid element represented by ``w``.

    Letters are appended one factor at a time and every adjacent pair is
    repeatedly made left-weighted until stable; the resulting sequence is
    the unique left normal form.
    """
    factors: list[list[int]] = []
    for x in w.letters:
        if factors and x not in _right_descents(tuple(factors[-1])):
            _times_gen(factors[-1], x)
        else:
            f = _identity(w.n)
            _times_gen(f, x)
            factors.append(f)
        changed = True
        while changed:
            changed = False
            for k in range(len(factors) - 2, -1, -1):
                if _make_left_weighted(factors[k], factors[k + 1]):
                    changed = True
        factors = [f for f in factors if f != _identity(w.n)]
    return GreedyNormalForm(w.n, tuple(tuple(f) for f in factors))


def monoid_equal(w1: BraidWord, w2: BraidWord) -> bool:
    if w1.n != w2.n:
        raise BraidError(f"strand mismatch: {w1.n} vs {w2.n}")
    if len(w1) != len(w2):
        return False
    return greedy_normal_form(w1).factors == greedy_normal_form(w2).factors
