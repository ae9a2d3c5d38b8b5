import itertools
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidbrick.quiver import (
    DynkinType,
    ExchangeMatrix,
    canonical_form,
    connected_components,
    is_acyclic,
    is_finite_type,
    mutate,
    mutate_path,
    mutation_class,
    recognize,
    submatrix,
    topological_order,
)


@st.composite
def quivers(draw, min_size=1, max_size=5):
    n = draw(st.integers(min_size, max_size))
    b = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(st.sampled_from([-1, 0, 0, 1]))
            b[i, j], b[j, i] = v, -v
    return ExchangeMatrix(b)


def path_quiver(n):
    return ExchangeMatrix.from_arrows(n, [(i, i + 1) for i in range(n - 1)])


def tree_quiver(n, edges):
    return ExchangeMatrix.from_arrows(n, edges)


D4 = tree_quiver(4, [(0, 1), (1, 2), (1, 3)])
E6 = tree_quiver(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)])
E7 = tree_quiver(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)])


def textbook_mutation(b, k):
    n = len(b)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if k in (i, j):
                out[i][j] = -b[i][j]
            else:
                out[i][j] = b[i][j] + (abs(b[i][k]) * b[k][j] + b[i][k] * abs(b[k][j])) // 2
    return out


def brute_key(B):
    n = B.size
    return min(B.b[np.ix_(p, p)].tobytes() for p in itertools.permutations(range(n)))


def brute_class(B):
    seen = {brute_key(B)}
    queue = deque([B])
    while queue:
        cur = queue.popleft()
        for k in range(cur.size):
            nxt = mutate(cur, k)
            key = brute_key(nxt)
            if key not in seen:
                seen.add(key)
                queue.append(nxt)
    return seen


def two_finite(B, cap=3000):
    """Finite type iff no quiver in the class has a double arrow."""
    seen = {brute_key(B)}
    queue = deque([B])
    while queue:
        cur = queue.popleft()
        if np.abs(cur.b).max(initial=0) >= 2:
            return False
        for k in range(cur.size):
            nxt = mutate(cur, k)
            key = brute_key(nxt)
            if key not in seen:
                seen.add(key)
                queue.append(nxt)
        assert len(seen) < cap
    return True


class TestMatrix:
    def test_skew_symmetry_enforced(self):
        with pytest.raises(ValueError):
            ExchangeMatrix([[0, 1], [1, 0]])

    def test_json(self):
        B = path_quiver(3)
        assert ExchangeMatrix.from_json(B.to_json()) == B
        assert ExchangeMatrix.from_json({"size": 0, "b": []}).size == 0

    def test_arrows_with_multiplicity(self):
        B = ExchangeMatrix([[0, 2], [-2, 0]])
        assert B.arrows() == [(0, 1), (0, 1)]


class TestMutation:
    @given(quivers(), st.data())
    def test_matches_textbook_formula(self, B, data):
        k = data.draw(st.integers(0, B.size - 1))
        assert mutate(B, k).b.tolist() == textbook_mutation(B.b.tolist(), k)

    @given(quivers(), st.data())
    def test_involution(self, B, data):
        k = data.draw(st.integers(0, B.size - 1))
        assert mutate(mutate(B, k), k) == B

    def test_triangle_to_path(self):
        tri = ExchangeMatrix.from_arrows(3, [(0, 1), (1, 2), (2, 0)])
        assert is_acyclic(mutate(tri, 0))

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            mutate(path_quiver(2), 2)


class TestCanonicalForm:
    @settings(max_examples=60)
    @given(quivers(max_size=5), st.randoms(use_true_random=False))
    def test_invariant_under_relabeling(self, B, rng):
        perm = list(range(B.size))
        rng.shuffle(perm)
        assert canonical_form(B.permuted(perm)) == canonical_form(B)

    @settings(max_examples=60)
    @given(quivers(max_size=5), quivers(max_size=5))
    def test_complete_invariant(self, A, B):
        same = A.size == B.size and brute_key(A) == brute_key(B)
        assert (canonical_form(A) == canonical_form(B)) == same

    def test_empty(self):
        assert canonical_form(ExchangeMatrix(np.zeros((0, 0)))) == canonical_form(ExchangeMatrix([]))


class TestMutationClass:
    @pytest.mark.parametrize("B", [path_quiver(3), path_quiver(4), path_quiver(5), D4, E6], ids=["A3", "A4", "A5", "D4", "E6"])
    def test_size_matches_brute_force(self, B):
        assert len(mutation_class(B)) == len(brute_class(B))

    def test_known_sizes(self):
        assert [len(mutation_class(path_quiver(n))) for n in range(1, 7)] == [1, 1, 4, 6, 19, 49]
        # E7 value cross-checked once against brute_class (takes minutes)
        assert len(mutation_class(E7)) == 416

    def test_cap_truncates(self):
        mc = mutation_class(path_quiver(6), cap=10)
        assert mc.truncated and len(mc) == 10


class TestRecognize:
    @pytest.mark.parametrize(
        "B,name",
        [
            (path_quiver(1), "A1"),
            (path_quiver(7), "A7"),
            (D4, "D4"),
            (E6, "E6"),
            (E7, "E7"),
            (tree_quiver(5, [(0, 1), (0, 2), (0, 3), (0, 4)]), "affine-D4"),
            (ExchangeMatrix.from_arrows(4, [(0, 1), (1, 2), (2, 3), (0, 3)]), "affine-A3"),
            (tree_quiver(7, [(0, 1), (1, 2), (1, 3), (3, 4), (4, 5), (4, 6)]), "affine-D6"),
            (tree_quiver(7, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)]), "affine-E6"),
        ],
    )
    def test_graph_types(self, B, name):
        assert [str(t) for t in recognize(B)] == [name]

    def test_oriented_cycle_is_not_dynkin(self):
        tri = ExchangeMatrix.from_arrows(3, [(0, 1), (1, 2), (2, 0)])
        assert recognize(tri)[0].family == "none"

    def test_components_and_parse(self):
        B = ExchangeMatrix.from_arrows(5, [(0, 1), (2, 3), (3, 4)])
        assert connected_components(B) == [[0, 1], [2, 3, 4]]
        assert [str(t) for t in recognize(B)] == ["A2", "A3"]
        assert DynkinType.parse("affine-E8") == DynkinType("affine-E", 8)
        assert submatrix(B, [2, 3]).b.tolist() == [[0, 1], [-1, 0]]

    def test_topological_order_sources_first(self):
        B = ExchangeMatrix.from_arrows(3, [(2, 1), (1, 0)])
        assert topological_order(B) == [2, 1, 0]
        assert topological_order(ExchangeMatrix.from_arrows(3, [(0, 1), (1, 2), (2, 0)])) is None


class TestFiniteType:
    @settings(max_examples=80, deadline=None)
    @given(quivers(max_size=5))
    def test_agrees_with_two_finite_oracle(self, B):
        v = is_finite_type(B)
        assert v.finite == two_finite(B)

    @settings(max_examples=40, deadline=None)
    @given(quivers(max_size=6))
    def test_certificate_replays(self, B):
        v = is_finite_type(B)
        terminal = mutate_path(B, v.path)
        assert terminal == v.terminal
        if v.status == "finite":
            assert all(t.finite for t in recognize(terminal))
            assert sum(t.rank for t in v.types) == B.size
        else:
            assert v.status == "infinite"
            assert np.abs(terminal.b).max() >= 2

    def test_cyclic_finite_example(self):
        tri = ExchangeMatrix.from_arrows(3, [(0, 1), (1, 2), (2, 0)])
        v = is_finite_type(tri, enumerate_class=True)
        assert v.status == "finite" and [str(t) for t in v.types] == ["A3"]
        assert v.class_size == 4

    def test_affine_is_infinite(self):
        v = is_finite_type(tree_quiver(5, [(0, 1), (0, 2), (0, 3), (0, 4)]))
        assert v.status == "infinite" and v.witness is not None

    def test_cap_gives_indeterminate(self):
        tri = ExchangeMatrix.from_arrows(3, [(0, 1), (1, 2), (2, 0)])
        v = is_finite_type(tri, cap=1)
        assert v.status == "indeterminate" and v.finite is None
