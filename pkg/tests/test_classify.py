from collections import Counter

import pytest
from hypothesis import given, settings

from braidbrick.braid import BraidError, BraidWord, components, connect_sum, mirror, parse_braid, split_union
from braidbrick.bricks import quiver_matrix
from braidbrick.classify import (
    TraceStep,
    classify,
    component_table_check,
    find_witness,
    isotopy_search,
    normalize_3strand,
    reduce_strands,
    replay_trace,
    split_decompose,
    standard_link,
    standard_link_word,
)
from braidbrick.quiver import DynkinType, is_acyclic, is_finite_type, recognize
from conftest import braid_words

FINITE_TYPES = (
    [f"A{r}" for r in range(1, 11)] + [f"D{r}" for r in range(4, 11)] + ["E6", "E7", "E8"]
)


def factor_types(verdict):
    return sorted(sorted(str(s.type) for s in f) for f in verdict.decomposition.factors)


class TestStandardLinks:
    def test_words(self):
        assert standard_link_word("A3") == BraidWord(2, (1, 1, 1, 1))
        assert standard_link_word("D5") == parse_braid("s1^3 s2 s1^2 s2")
        assert standard_link_word("E6") == parse_braid("s1^3 s2 s1^3 s2")
        assert str(standard_link("E8")) == "E8"
        with pytest.raises(BraidError):
            standard_link_word("E9")
        with pytest.raises(BraidError):
            standard_link_word(DynkinType("D", 3))

    @pytest.mark.parametrize("name", FINITE_TYPES)
    def test_quiver_type_of_standard_word(self, name):
        assert [str(t) for t in recognize(quiver_matrix(standard_link_word(name)))] == [name]

    def test_component_table(self):
        rows = {r.type: r for r in component_table_check(12)}
        assert all(r.ok for r in rows.values())
        assert rows["E7"].components == 2
        assert rows["D6"].components == 3
        assert rows["A12"].components == 1


class TestDecomposition:
    def test_connect_sum(self):
        v = classify(parse_braid("s1^3 s2 s3^3"))
        assert v.verdict == "finite"
        assert factor_types(v) == [["A2", "A2"]]
        assert v.decomposition.unknots == 0

    def test_split_union(self):
        v = classify(split_union(BraidWord(2, (1,) * 4), BraidWord(2, (1,) * 3)))
        assert factor_types(v) == [["A2"], ["A3"]]

    def test_empty_word_unknots(self):
        v = classify(BraidWord(4, ()))
        assert v.verdict == "finite"
        assert v.decomposition.unknots == 4 == components(BraidWord(4, ()))
        assert v.decomposition.literal_unknots == 2
        assert any("empty-level" in n for n in v.notes)

    def test_three_strand_normalization(self):
        assert normalize_3strand(parse_braid("s1 s2 s1 s2 s1 s2")) == standard_link_word("D4")
        v = classify(parse_braid("s1 s2 s1^2 s2^3"))
        assert factor_types(v) == [["A5"]]

    def test_strand_reduction(self):
        w = parse_braid("s1^2 s2 s1^2 s3 s2 s3")
        out = reduce_strands(w)
        assert out is not None and out[0].n == w.n - 1

    def test_split_decompose_trace(self):
        res = split_decompose(parse_braid("s1^3 s3^3"))
        assert res.unknots == 0 and len(res.factors) == 2
        assert res.trace[0].move == "split"

    def test_isotopy_search(self):
        w = parse_braid("s1 s2 s1")
        path = isotopy_search(w, lambda v: v.letters == (2, 1, 2))
        assert path == [("R3", {"pos": 0})]
        assert isotopy_search(w, lambda v: False, budget=50) is None

    @pytest.mark.parametrize("name", FINITE_TYPES)
    def test_round_trip(self, name):
        v = classify(standard_link_word(name))
        assert v.verdict == "finite"
        assert factor_types(v) == [[name]]
        assert replay_trace(v.word, v.trace) == {"0": name}

    def test_replay_rejects_tampering(self):
        v = classify(parse_braid("s1 s2 s1 s2 s1 s2"))
        steps = list(v.trace)
        k = next(i for i, s in enumerate(steps) if s.move in ("R3", "rho", "c"))
        s = steps[k]
        steps[k] = TraceStep(s.piece, s.move, s.params, ("n=3: s1",))
        with pytest.raises(BraidError):
            replay_trace(v.word, steps)


class TestInfinite:
    @pytest.mark.parametrize(
        "text,n",
        [("s1^2 s2^2 s1^2 s2^2", 3), ("s1 s3 s2^2 s1 s3 s2^2", 4), ("s1^2 s2 s1^2 s2 s3^2 s2 s3^2 s2", 4)],
    )
    def test_witnessed(self, text, n):
        w = parse_braid(text, n_override=n)
        v = classify(w)
        assert v.verdict == "infinite"
        assert v.witness is not None
        q = quiver_matrix(v.witness.word)
        assert is_acyclic(q) and not all(t.finite for t in recognize(q))

    def test_witness_for_mirror(self):
        w = mirror(parse_braid("s1^2 s2^2 s1^2 s2^2 s1"))
        assert find_witness(w) is not None

    def test_json_shape(self):
        data = classify(parse_braid("s1^3 s2 s1^3 s2")).to_json()
        assert data["verdict"] == "finite" and data["factors"] == [["E6"]] and data["unknots"] == 0
        assert isinstance(data["trace"], list)

    def test_cap_indeterminate(self):
        v = classify(parse_braid("s1^2 s2^2 s1^2 s2^2"), cap=1)
        assert v.verdict == "indeterminate" and v.finite is None


@settings(max_examples=60, deadline=None)
@given(braid_words(max_n=4, max_len=7))
def test_verdict_matches_quiver_engine(w):
    v = classify(w)
    cert = is_finite_type(quiver_matrix(w))
    assert v.verdict == cert.status
    if v.verdict == "finite":
        assert v.decomposition.type_multiset() == Counter(str(t) for t in cert.types)
        leaves = replay_trace(w, v.trace)
        assert sorted(leaves.values()) == sorted(["unknot"] * v.decomposition.unknots + list(v.decomposition.type_multiset().elements()))
        total = v.decomposition.unknots + sum(
            components(_sum_word(f)) for f in v.decomposition.factors
        )
        assert total == components(w)


def _sum_word(f):
    acc = f[0].word
    for s in f[1:]:
        acc = connect_sum(acc, s.word)
    return acc
