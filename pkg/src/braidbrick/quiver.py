"""Skew-symmetric exchange matrices: mutation, canonical forms, Dynkin
recognition and a certifying finite/infinite type decision.

Convention: ``b[i, j] > 0`` means ``b[i, j]`` arrows ``i -> j``.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ExchangeMatrix",
    "DynkinType",
    "TypeVerdict",
    "MutationClass",
    "mutate",
    "mutate_path",
    "is_acyclic",
    "topological_order",
    "connected_components",
    "is_connected",
    "submatrix",
    "recognize",
    "recognize_component",
    "canonical_form",
    "mutation_class",
    "is_finite_type",
]


@dataclass(frozen=True, eq=False)
class ExchangeMatrix:
    b: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.b, dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, 0), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("exchange matrix must be square")
        if not np.array_equal(arr, -arr.T):
            raise ValueError("exchange matrix must be skew-symmetric")
        arr.setflags(write=False)
        object.__setattr__(self, "b", arr)

    @property
    def size(self) -> int:
        return self.b.shape[0]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExchangeMatrix) and np.array_equal(self.b, other.b)

    def __hash__(self) -> int:
        return hash((self.size, self.b.tobytes()))

    def arrows(self) -> list[tuple[int, int]]:
        """Arrows ``(i, j)`` listed with multiplicity."""
        out = []
        for i, j in zip(*np.nonzero(self.b > 0)):
            out.extend([(int(i), int(j))] * int(self.b[i, j]))
        return out

    @classmethod
    def from_arrows(cls, size: int, arrows: Iterable[tuple[int, int]]) -> "ExchangeMatrix":
        b = np.zeros((size, size), dtype=np.int64)
        for i, j in arrows:
            b[i, j] += 1
            b[j, i] -= 1
        return cls(b)

    def permuted(self, perm: Sequence[int]) -> "ExchangeMatrix":
        """Relabel so that new vertex ``k`` is old vertex ``perm[k]``."""
        p = np.asarray(perm, dtype=np.int64)
        return ExchangeMatrix(self.b[np.ix_(p, p)])

    def to_json(self) -> dict:
        return {"size": self.size, "b": self.b.tolist()}

    @classmethod
    def from_json(cls, data: dict | str) -> "ExchangeMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        b = data["b"]
        if not b:
            return cls(np.zeros((int(data.get("size", 0)),) * 2, dtype=np.int64))
        return cls(np.array(b, dtype=np.int64))


def mutate(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    if not 0 <= k < B.size:
        raise IndexError(f"vertex {k} out of range for size {B.size}")
    b = B.b
    col = b[:, k]
    row = b[k, :]
    new = b + np.sign(col)[:, None] * np.maximum(col[:, None] * row[None, :], 0)
    new[k, :] = -b[k, :]
    new[:, k] = -b[:, k]
    return ExchangeMatrix(new)


def mutate_path(B: ExchangeMatrix, path: Iterable[int]) -> ExchangeMatrix:
    for k in path:
        B = mutate(B, k)
    return B


def topological_order(B: ExchangeMatrix) -> list[int] | None:
    """Sources-first order, smallest index among ready vertices first."""
    n = B.size
    indeg = [int(np.count_nonzero(B.b[:, j] > 0)) for j in range(n)]
    ready = [j for j in range(n) if indeg[j] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for j in np.nonzero(B.b[v] > 0)[0]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, int(j))
    return order if len(order) == n else None


def is_acyclic(B: ExchangeMatrix) -> bool:
    return topological_order(B) is not None


def connected_components(B: ExchangeMatrix) -> list[list[int]]:
    n = B.size
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in np.nonzero(B.b[v])[0]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(int(u))
        comps.append(sorted(comp))
    return comps


def is_connected(B: ExchangeMatrix) -> bool:
    return len(connected_components(B)) <= 1


def submatrix(B: ExchangeMatrix, vertices: Sequence[int]) -> ExchangeMatrix:
    return B.permuted(vertices)


# ---------------------------------------------------------------------------
# Dynkin / affine recognition

_FINITE = ("A", "D", "E")
_AFFINE = ("affine-A", "affine-D", "affine-E")


@dataclass(frozen=True, order=True)
class DynkinType:
    family: str
    rank: int

    @property
    def finite(self) -> bool:
        return self.family in _FINITE

    @property
    def affine(self) -> bool:
        return self.family in _AFFINE

    def __str__(self) -> str:
        if self.family == "none":
            return f"none({self.rank})"
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "DynkinType":
        text = text.strip()
        for fam in _AFFINE + _FINITE:
            if text.startswith(fam) and text[len(fam):].isdigit():
                return cls(fam, int(text[len(fam):]))
        raise ValueError(f"unknown Dynkin type {text!r}")


def _legs(adj: dict[int, set[int]], center: int) -> list[int]:
    lengths = []
    for nb in adj[center]:
        prev, cur, length = center, nb, 1
        while len(adj[cur]) == 2:
            nxt = next(x for x in adj[cur] if x != prev)
            prev, cur = cur, nxt
            length += 1
        lengths.append(length)
    return sorted(lengths)


def _graph_type(vertices: list[int], edges: list[tuple[int, int]]) -> DynkinType:
    m = len(vertices)
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    deg = {v: len(adj[v]) for v in vertices}
    none = DynkinType("none", m)
    if len(edges) == m and m >= 3 and all(d == 2 for d in deg.values()):
        return DynkinType("affine-A", m - 1)
    if len(edges) != m - 1:
        return none
    branch = [v for v in vertices if deg[v] >= 3]
    if not branch:
        return DynkinType("A", m)
    if len(branch) == 1:
        c = branch[0]
        legs = _legs(adj, c)
        if deg[c] == 4:
            return DynkinType("affine-D", 4) if legs == [1, 1, 1, 1] else none
        if deg[c] != 3:
            return none
        if legs[0] == 1 and legs[1] == 1:
            return DynkinType("D", m)
        table = {
            (1, 2, 2): DynkinType("E", 6),
            (1, 2, 3): DynkinType("E", 7),
            (1, 2, 4): DynkinType("E", 8),
            (2, 2, 2): DynkinType("affine-E", 6),
            (1, 3, 3): DynkinType("affine-E", 7),
            (1, 2, 5): DynkinType("affine-E", 8),
        }
        return table.get(tuple(legs), none)
    if len(branch) == 2 and all(deg[v] == 3 for v in branch):
        for c in branch:
            leaves = [u for u in adj[c] if deg[u] == 1]
            if len(leaves) != 2:
                return none
        return DynkinType("affine-D", m - 1)
    return none


def recognize_component(B: ExchangeMatrix, vertices: Sequence[int]) -> DynkinType:
    sub = submatrix(B, vertices)
    if np.any(np.abs(sub.b) > 1) or not is_acyclic(sub):
        return DynkinType("none", len(vertices))
    edges = [(int(i), int(j)) for i, j in zip(*np.nonzero(sub.b > 0))]
    return _graph_type(list(range(len(vertices))), edges)


def recognize(B: ExchangeMatrix) -> list[DynkinType]:
    """Type of each connected component (ordered by smallest vertex)."""
    return [recognize_component(B, comp) for comp in connected_components(B)]


# ---------------------------------------------------------------------------
# canonical form

_EMPTY_FORM = b"\x00\x00"


Nbrs = list[list[tuple[int, int]]]


def _refine(nbrs: Nbrs, colors: list[int]) -> list[int]:
    n = len(colors)
    ncells = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted([(colors[u], w) for u, w in nbrs[v]])))
            for v in range(n)
        ]
        rank = {s: r for r, s in enumerate(sorted(set(sigs)))}
        colors = [rank[s] for s in sigs]
        if len(rank) == ncells:
            return colors
        ncells = len(rank)


def _twins(rows: list[list[int]], u: int, v: int) -> bool:
    if rows[u][v] != 0:
        return False
    ru, rv = rows[u], rows[v]
    return all(ru[k] == rv[k] for k in range(len(ru)) if k != u and k != v)


def _encode(b: np.ndarray, order: Sequence[int]) -> bytes:
    p = np.asarray(order, dtype=np.int64)
    return len(order).to_bytes(2, "big") + b[np.ix_(p, p)].astype(">i2").tobytes()


def _canon_search(b: np.ndarray, rows: list[list[int]], nbrs: Nbrs, colors: list[int]) -> bytes:
    colors = _refine(nbrs, colors)
    n = len(colors)
    if len(set(colors)) == n:
        order = sorted(range(n), key=colors.__getitem__)
        return _encode(b, order)
    sizes: dict[int, int] = {}
    for c in colors:
        sizes[c] = sizes.get(c, 0) + 1
    target = min(c for c, s in sizes.items() if s > 1)
    cell = [v for v in range(n) if colors[v] == target]
    reps: list[int] = []
    for v in cell:
        if not any(_twins(rows, v, r) for r in reps):
            reps.append(v)
    best: bytes | None = None
    for v in reps:
        new = [2 * c for c in colors]
        new[v] = 2 * target - 1
        code = _canon_search(b, rows, nbrs, new)
        if best is None or code < best:
            best = code
    assert best is not None
    return best


def canonical_form(B: ExchangeMatrix) -> bytes:
    """Relabeling-invariant byte key; equal iff the quivers are isomorphic."""
    if B.size == 0:
        return _EMPTY_FORM
    rows = B.b.tolist()
    nbrs = [[(u, w) for u, w in enumerate(row) if w] for row in rows]
    return _canon_search(B.b, rows, nbrs, [0] * B.size)


# ---------------------------------------------------------------------------
# mutation classes and the finite-type decision


@dataclass(frozen=True)
class MutationClass:
    forms: frozenset[bytes]
    truncated: bool

    def __len__(self) -> int:
        return len(self.forms)


def mutation_class(B: ExchangeMatrix, cap: int = 100_000) -> MutationClass:
    """Breadth-first closure of the mutation class modulo isomorphism."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    start = canonical_form(B)
    seen = {start}
    queue = deque([B])
    while queue:
        cur = queue.popleft()
        for k in range(cur.size):
            nxt = mutate(cur, k)
            key = canonical_form(nxt)
            if key in seen:
                continue
            if len(seen) >= cap:
                return MutationClass(frozenset(seen), True)
            seen.add(key)
            queue.append(nxt)
    return MutationClass(frozenset(seen), False)


@dataclass(frozen=True)
class TypeVerdict:
    """Outcome of the finite-type search.

    ``status`` is ``"finite"``, ``"infinite"`` or ``"indeterminate"``.  The
    ``path`` replays from the input matrix to ``terminal``: for a finite
    verdict ``terminal`` is an acyclic disjoint union of Dynkin quivers, for
    an infinite verdict it contains an entry with ``|b_ij| >= 2``.
    """

    status: str
    path: tuple[int, ...]
    terminal: ExchangeMatrix
    types: tuple[DynkinType, ...] = ()
    explored: int = 0
    class_size: int | None = None
    witness: tuple[int, int] | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def finite(self) -> bool | None:
        if self.status == "indeterminate":
            return None
        return self.status == "finite"

    def to_json(self) -> dict:
        out = {
            "finite": self.finite,
            "status": self.status,
            "path": list(self.path),
            "terminal": self.terminal.to_json(),
            "types": [str(t) for t in self.types],
            "explored": self.explored,
        }
        if self.class_size is not None:
            out["class_size"] = self.class_size
        if self.witness is not None:
            out["witness_entry"] = list(self.witness)
        return out


def _big_entry(b: np.ndarray) -> tuple[int, int] | None:
    idx = np.argwhere(np.abs(b) >= 2)
    if len(idx) == 0:
        return None
    i, j = idx[0]
    return int(i), int(j)


def _component_search(B: ExchangeMatrix, cap: int):
    """BFS on a connected quiver; returns (status, path, explored)."""
    seen = {canonical_form(B)}
    queue: deque[tuple[ExchangeMatrix, tuple[int, ...]]] = deque([(B, ())])
    while queue:
        cur, path = queue.popleft()
        if _big_entry(cur.b) is not None:
            return "infinite", path, len(seen)
        if recognize_component(cur, range(cur.size)).finite:
            return "finite", path, len(seen)
        for k in range(cur.size):
            nxt = mutate(cur, k)
            if _big_entry(nxt.b) is not None:
                return "infinite", path + (k,), len(seen)
            key = canonical_form(nxt)
            if key in seen:
                continue
            if len(seen) >= cap:
                return "indeterminate", path, len(seen)
            seen.add(key)
            queue.append((nxt, path + (k,)))
    # a closed class without double arrows and without a Dynkin member
    # cannot occur for skew-symmetric matrices; report rather than guess
    return "indeterminate", (), len(seen)


def is_finite_type(B: ExchangeMatrix, cap: int = 100_000, enumerate_class: bool = False) -> TypeVerdict:
    """Decide whether ``B`` is mutation equivalent to a union of Dynkin quivers.

    Each connected component is explored breadth-first modulo isomorphism.
    Reaching an entry ``|b_ij| >= 2`` certifies infinite type; reaching an
    acyclic Dynkin quiver certifies finite type.  Exceeding ``cap`` explored
    classes per component yields ``"indeterminate"``.
    """
    full_path: list[int] = []
    explored = 0
    for comp in connected_components(B):
        sub = submatrix(B, comp)
        status, path, n_seen = _component_search(sub, cap)
        explored += n_seen
        full_path.extend(comp[k] for k in path)
        if status != "finite":
            terminal = mutate_path(B, full_path)
            witness = _big_entry(terminal.b) if status == "infinite" else None
            return TypeVerdict(status, tuple(full_path), terminal, explored=explored, witness=witness)
    terminal = mutate_path(B, full_path)
    types = tuple(recognize(terminal))
    size = None
    if enumerate_class:
        mc = mutation_class(B, cap)
        size = None if mc.truncated else len(mc)
    return TypeVerdict("finite", tuple(full_path), terminal, types, explored, class_size=size)
