"""Seeds with frieze points and c-matrices, and the DT mutation dynamics.

A seed carries the exchange matrix, a point of positive rationals obtained
by specializing every initial cluster variable to 1, and the c-matrix whose
column ``j`` is the c-vector of vertex ``j``.  For an acyclic quiver the
sources-first mutation sequence is maximal green and realizes the DT
transformation; iterating it on the unit seed gives the frieze orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .braid import BraidError, BraidWord
from .quiver import ExchangeMatrix, mutate, topological_order

CMatrix = tuple[tuple[int, ...], ...]


class ClusterError(ValueError):
    """Raised when a DT sequence is requested for an unsuitable quiver."""


@dataclass(frozen=True)
class Seed:
    B: ExchangeMatrix
    x: tuple[Fraction, ...]
    C: CMatrix

    @property
    def size(self) -> int:
        return self.B.size

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.C)

    def to_json(self) -> dict:
        return {
            "b": self.B.b.tolist(),
            "x": [_frac_text(v) for v in self.x],
            "c": [list(r) for r in self.C],
        }


def _frac_text(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def unit_seed(B: ExchangeMatrix) -> Seed:
    n = B.size
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return Seed(B, (Fraction(1),) * n, ident)


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _coherent(col: Sequence[int]) -> bool:
    return all(v >= 0 for v in col) or all(v <= 0 for v in col)


def seed_mutate(s: Seed, k: int) -> Seed:
    """Mutate the seed at vertex ``k``.

    The frieze coordinate follows the exchange relation
    ``x_k x_k' = prod_{b_ik > 0} x_i^{b_ik} + prod_{b_ik < 0} x_i^{-b_ik}``;
    the c-vectors follow ``c_j' = c_j + [eps_k b_jk]_+ c_k`` for ``j != k``
    and ``c_k' = -c_k``, where ``eps_k`` is the sign of ``c_k``.
    """
    n = s.size
    if not 0 <= k < n:
        raise IndexError(f"vertex {k} out of range for size {n}")
    col = s.B.b[:, k].tolist()
    plus, minus = Fraction(1), Fraction(1)
    for i, b in enumerate(col):
        if b > 0:
            plus *= s.x[i] ** b
        elif b < 0:
            minus *= s.x[i] ** (-b)
    x = list(s.x)
    x[k] = (plus + minus) / s.x[k]

    C = [list(r) for r in s.C]
    for i in range(n):
        cik = s.C[i][k]
        for j in range(n):
            if j == k:
                C[i][j] = -cik
            else:
                b = col[j]
                C[i][j] += _sign(b) * max(0, b * cik)
    new = Seed(mutate(s.B, k), tuple(x), tuple(tuple(r) for r in C))
    for j in range(n):
        assert _coherent(new.column(j)), f"c-vector {j} lost sign coherence"
    assert all(v > 0 for v in new.x), "frieze point left the positive orthant"
    return new


def mutate_seed_path(s: Seed, path: Sequence[int]) -> Seed:
    for k in path:
        s = seed_mutate(s, k)
    return s


def dt_sequence(B: ExchangeMatrix) -> list[int]:
    """Sources-first vertex order of an acyclic quiver."""
    order = topological_order(B)
    if order is None:
        raise ClusterError("DT sequence needs an acyclic quiver")
    return order


def verify_maximal_green(B: ExchangeMatrix, seq: Sequence[int]) -> bool:
    """True when every step mutates a green vertex and the end is all red.

    All red means the final c-matrix is a permutation matrix with every
    column nonpositive.
    """
    s = unit_seed(B)
    for k in seq:
        if not 0 <= k < s.size or any(v < 0 for v in s.column(k)):
            return False
        if all(v == 0 for v in s.column(k)):
            return False
        s = seed_mutate(s, k)
    C = np.array(s.C, dtype=np.int64).reshape(s.size, s.size)
    if s.size == 0:
        return True
    if not (C <= 0).all():
        return False
    P = -C
    return bool((P.sum(axis=0) == 1).all() and (P.sum(axis=1) == 1).all())


def apply_dt(s: Seed, B0: ExchangeMatrix | None = None) -> Seed:
    """One DT step: the sources-first sequence of ``B0`` (default ``s.B``)."""
    B0 = s.B if B0 is None else B0
    if not np.array_equal(s.B.b, B0.b):
        raise ClusterError("seed quiver does not match the DT source quiver")
    return mutate_seed_path(s, dt_sequence(B0))


def apply_dt_inverse(s: Seed, B0: ExchangeMatrix | None = None) -> Seed:
    """Inverse DT step: the same vertex sequence read backwards."""
    B0 = s.B if B0 is None else B0
    if not np.array_equal(s.B.b, B0.b):
        raise ClusterError("seed quiver does not match the DT source quiver")
    return mutate_seed_path(s, list(reversed(dt_sequence(B0))))


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class OrbitReport:
    points: tuple[tuple[Fraction, ...], ...]
    period: int | None
    growth: tuple[tuple[int, int], ...]  # (max numerator bits, max denominator bits)
    iterations: int

    def to_json(self) -> dict:
        out = {
            "iterations": self.iterations,
            "period": self.period,
            "points": {str(i): [_frac_text(v) for v in p] for i, p in enumerate(self.points)},
            "growth": [list(g) for g in self.growth],
        }
        if self.period is None:
            out["note"] = (
                f"no period within {self.iterations} iterations; for an acyclic quiver "
                "the DT transformation has finite order exactly when the quiver is of finite type"
            )
        return out


def _growth(p: Sequence[Fraction]) -> tuple[int, int]:
    return (
        max((v.numerator.bit_length() for v in p), default=0),
        max((v.denominator.bit_length() for v in p), default=0),
    )


def dt_orbit(B: ExchangeMatrix, max_iter: int = 64) -> OrbitReport:
    """Iterate DT on the unit seed until the frieze point returns.

    The DT map is invertible, so the orbit is purely periodic whenever it
    is finite and the first repeated point is the starting one.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    seq = dt_sequence(B)
    s = unit_seed(B)
    points = [s.x]
    growth = [_growth(s.x)]
    period = None
    for it in range(1, max_iter + 1):
        s = mutate_seed_path(s, seq)
        if not np.array_equal(s.B.b, B.b):
            raise ClusterError("DT sequence did not return the source quiver")
        points.append(s.x)
        growth.append(_growth(s.x))
        if s.x == points[0]:
            period = it
            break
    return OrbitReport(tuple(points), period, tuple(growth), len(points) - 1)


# ---------------------------------------------------------------------------
# filling seeds


def seed_permutation(a: Seed, b: Seed) -> list[int] | None:
    """Vertex map ``sigma`` with ``b`` equal to ``a`` relabeled, or ``None``.

    Column ``j`` of ``a.C`` must equal column ``sigma[j]`` of ``b.C`` and the
    exchange matrices must agree under the same relabeling.  c-vectors of a
    seed are linearly independent, so the column match pins ``sigma`` down.
    """
    if a.size != b.size:
        return None
    cols_b = {b.column(j): j for j in range(b.size)}
    sigma = []
    for j in range(a.size):
        hit = cols_b.get(a.column(j))
        if hit is None:
            return None
        sigma.append(hit)
    if len(set(sigma)) != len(sigma):
        return None
    p = np.asarray(sigma, dtype=np.int64)
    if a.size and not np.array_equal(a.B.b, b.B.b[np.ix_(p, p)]):
        return None
    return sigma


def seeds_equivalent(a: Seed, b: Seed) -> bool:
    return seed_permutation(a, b) is not None


@dataclass(frozen=True)
class FillingSeeds:
    seeds: tuple[Seed, ...]
    distinct: tuple[tuple[bool, ...], ...]  # distinct[i][j]: seeds i and j differ
    repeat: tuple[int, int] | None  # first (earlier, later) pair that coincides

    @property
    def pairwise_distinct(self) -> bool:
        return self.repeat is None

    def to_json(self) -> dict:
        return {
            "m_max": len(self.seeds) - 1,
            "pairwise_distinct": self.pairwise_distinct,
            "repeat": list(self.repeat) if self.repeat else None,
            "distinct": [[int(v) for v in row] for row in self.distinct],
            "c_matrices": [[list(r) for r in s.C] for s in self.seeds],
        }


def filling_seeds(w: BraidWord, m_max: int) -> FillingSeeds:
    """Seeds of the fillings ``L_0..L_m_max``: ``L_m`` is ``DT^{-2m}`` of ``L_0``."""
    from .bricks import quiver_matrix

    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    B = quiver_matrix(w)
    if topological_order(B) is None:
        raise BraidError("filling seeds need an acyclic brick quiver")
    seeds = [unit_seed(B)]
    for _ in range(m_max):
        s = apply_dt_inverse(apply_dt_inverse(seeds[-1], B), B)
        seeds.append(s)
    n = len(seeds)
    distinct = [[False] * n for _ in range(n)]
    repeat = None
    for j in range(n):
        for i in range(j):
            d = not seeds_equivalent(seeds[i], seeds[j])
            distinct[i][j] = distinct[j][i] = d
            if not d and repeat is None:
                repeat = (i, j)
    return FillingSeeds(tuple(seeds), tuple(tuple(r) for r in distinct), repeat)
