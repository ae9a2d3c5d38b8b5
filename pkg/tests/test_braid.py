import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from braidbrick.braid import (
    BraidError,
    BraidWord,
    apply_move,
    commute_move,
    components,
    connect_sum,
    cyclic_rotate,
    delete_letters,
    filling_b1,
    filling_genus,
    format_braid,
    markov_destabilize,
    mirror,
    opposite,
    parse_braid,
    permutation,
    r3_move,
    split_union,
    subword_range,
    tb,
)
from conftest import braid_words


def naive_cycles(w):
    # follow each strand through the crossings one at a time
    n = w.n
    count, seen = 0, set()
    for start in range(n):
        if start in seen:
            continue
        count += 1
        k = start
        while k not in seen:
            seen.add(k)
            pos = k
            for x in w.letters:
                if pos == x - 1:
                    pos = x
                elif pos == x:
                    pos = x - 1
            k = pos
    return count


class TestParse:
    def test_exponents_and_spellings(self):
        a = parse_braid("s1^3 s2 s1^3 s2")
        assert a == BraidWord(3, (1, 1, 1, 2, 1, 1, 1, 2))
        assert parse_braid("s_1^{3} s_2 s_1^{3} s_2") == a
        assert parse_braid("11121112") == a

    def test_strand_inference_and_override(self):
        assert parse_braid("s1^2").n == 2
        assert parse_braid("").n == 2
        assert parse_braid("s1 s1", n_override=4).n == 4

    def test_json_form(self):
        w = parse_braid('{"n": 4, "letters": [1, 3, 2]}')
        assert w == BraidWord(4, (1, 3, 2))
        assert BraidWord.from_json(json.dumps(w.to_json())) == w

    @pytest.mark.parametrize("bad", ["s0", "s1^0", "t1", "s1^x", "102"])
    def test_malformed(self, bad):
        with pytest.raises(BraidError):
            parse_braid(bad)

    def test_override_too_small(self):
        with pytest.raises(BraidError):
            parse_braid("s3", n_override=3)

    def test_letter_range_checked(self):
        with pytest.raises(BraidError):
            BraidWord(3, (3,))
        with pytest.raises(BraidError):
            BraidWord(1, ())

    def test_format(self):
        assert format_braid(BraidWord(3, (1, 1, 2, 1))) == "s1^2 s2 s1"
        assert format_braid(BraidWord(3, ())) == ""
        assert format_braid(BraidWord(3, (1, 2)), compact=True) == "12"

    @given(braid_words())
    def test_round_trip(self, w):
        assert parse_braid(format_braid(w), n_override=w.n) == w


class TestMoves:
    def test_r3(self):
        w = BraidWord(3, (2, 1, 2, 1))
        assert r3_move(w, 0).letters == (1, 2, 1, 1)
        assert r3_move(w, 1).letters == (2, 2, 1, 2)
        with pytest.raises(BraidError):
            r3_move(BraidWord(3, (1, 1, 1)), 0)
        with pytest.raises(BraidError):
            r3_move(w, 2)

    def test_commute(self):
        w = BraidWord(4, (1, 3, 2))
        assert commute_move(w, 0).letters == (3, 1, 2)
        with pytest.raises(BraidError):
            commute_move(w, 1)

    def test_rotate(self):
        w = BraidWord(3, (1, 2, 2))
        assert cyclic_rotate(w, 1).letters == (2, 2, 1)
        assert cyclic_rotate(w, -1).letters == (2, 1, 2)
        assert cyclic_rotate(BraidWord(3, ()), 5).letters == ()

    def test_markov_prefers_top(self):
        assert markov_destabilize(BraidWord(3, (1, 2, 1))) == BraidWord(2, (1, 1))
        assert markov_destabilize(BraidWord(3, (1, 2, 2))) == BraidWord(2, (1, 1))
        assert markov_destabilize(BraidWord(3, (1, 1, 2, 2))) is None
        assert markov_destabilize(BraidWord(2, (1,))) is None

    def test_delete_and_opposite(self):
        w = BraidWord(3, (1, 2, 1, 2))
        assert delete_letters(w, [0, 3]).letters == (2, 1)
        assert opposite(BraidWord(3, (1, 1, 2))).letters == (2, 1, 1)
        with pytest.raises(BraidError):
            delete_letters(w, [4])

    def test_apply_move_dispatch(self):
        w = BraidWord(4, (1, 3, 2, 1, 2))
        assert apply_move(w, "c", pos=0).letters == (3, 1, 2, 1, 2)
        assert apply_move(w, "R3", pos=2).letters == (1, 3, 1, 2, 1)
        assert apply_move(w, "rho").letters == (3, 2, 1, 2, 1)
        assert apply_move(w, "R1") == BraidWord(3, (1, 2, 1, 2))
        with pytest.raises(BraidError):
            apply_move(w, "twist")
        with pytest.raises(BraidError):
            apply_move(BraidWord(3, (1, 1, 2, 2)), "R1")

    @given(braid_words(min_len=1), st.integers(-20, 20))
    def test_rotation_inverse(self, w, k):
        assert cyclic_rotate(cyclic_rotate(w, k), -k) == w

    @given(braid_words())
    def test_involutions(self, w):
        assert opposite(opposite(w)) == w
        assert mirror(mirror(w)) == w


class TestClosure:
    @given(braid_words())
    def test_components_against_strand_tracing(self, w):
        assert components(w) == naive_cycles(w)

    @given(braid_words(max_n=4), braid_words(max_n=4))
    def test_split_union_adds(self, a, b):
        assert components(split_union(a, b)) == components(a) + components(b)

    @given(braid_words(max_n=4), braid_words(max_n=4))
    def test_connect_sum_merges_one_pair(self, a, b):
        assert components(connect_sum(a, b)) == components(a) + components(b) - 1

    def test_permutation_images(self):
        assert permutation(BraidWord(3, (1,))).images == (2, 1, 3)
        assert permutation(BraidWord(3, (1, 2))).images == (3, 1, 2)
        assert permutation(BraidWord(3, (1, 2))).cycles() == [(1, 3, 2)]

    def test_tb_and_genus(self):
        w = parse_braid("s1 s2 s1^2 s2^2 s1^2 s2^2")
        assert tb(w) == 7
        assert filling_b1(w) == 8
        assert filling_genus(w) == 4
        with pytest.raises(BraidError):
            filling_genus(parse_braid("s1^2"))

    def test_subword_range(self):
        w = BraidWord(6, (1, 2, 3, 1, 1, 2, 5, 2, 3, 4))
        assert subword_range(w, 2, 3).letters == (2, 3, 2, 2, 3)
        assert subword_range(w, 2, 3, reindex=True) == BraidWord(3, (1, 2, 1, 1, 2))
        with pytest.raises(BraidError):
            subword_range(w, 3, 2)

    @given(braid_words(min_len=3), st.randoms(use_true_random=False))
    def test_isotopy_moves_keep_components(self, w, rng):
        start = components(w)
        for _ in range(30):
            move = rng.choice(["rho", "R3", "c"])
            try:
                w = apply_move(w, move, pos=rng.randrange(len(w)), k=rng.randrange(len(w)))
            except BraidError:
                continue
            assert components(w) == start
