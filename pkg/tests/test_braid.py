import itertools
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from braidsig.braid import (
    BfsResult,
    BraidParseError,
    BraidWord,
    InapplicableMove,
    RewriteMove,
    applicable_moves,
    apply_move,
    betti_number,
    bfs_equal,
    closure_components,
    enumerate_positive_words,
    exponent_sum,
    format_braid,
    parse_braid,
    permutation,
    syllables,
    word,
)
from braidsig.seifert import seifert_matrix

from .conftest import any_words, words


def necklaces(k, length):
    """Burnside count of rotation classes of k-letter words."""
    phi = lambda d: sum(1 for i in range(1, d + 1) if gcd(i, d) == 1)
    return sum(phi(d) * k ** (length // d) for d in range(1, length + 1) if length % d == 0) // length


class TestParse:
    def test_expansion_and_strand_inference(self):
        w = parse_braid("1^2 2^2")
        assert w.strands == 3 and w.letters == (1, 1, 2, 2)

    def test_delta(self):
        assert parse_braid("1 2 1", 3).letters == (1, 2, 1)

    def test_explicit_strands_out_of_range(self):
        with pytest.raises(BraidParseError) as exc:
            parse_braid("3^4", 2)
        assert exc.value.token == 1

    @pytest.mark.parametrize("text,token", [("1^x", 1), ("1 2 0", 3), ("1 2^0", 2), ("a", 1), ("1^-2", 1)])
    def test_malformed_tokens_report_position(self, text, token):
        with pytest.raises(BraidParseError) as exc:
            parse_braid(text)
        assert exc.value.token == token

    def test_extra_whitespace_and_empty(self):
        assert parse_braid("  1   2^2\n").letters == (1, 2, 2)
        assert parse_braid("").letters == ()

    def test_format_groups_syllables(self):
        assert format_braid(word(1, 1, 2, 2, 2, 1)) == "1^2 2^3 1"

    @given(any_words(max_size=30))
    def test_round_trip(self, w):
        assert parse_braid(format_braid(w), w.strands) == w

    def test_constructor_validates(self):
        with pytest.raises(ValueError):
            BraidWord(3, (1, 3))
        with pytest.raises(ValueError):
            BraidWord(1, ())


class TestInvariants:
    def test_exponent_sum(self):
        assert exponent_sum(word(1, 2, 1)) == 3
        assert exponent_sum(BraidWord(3, (1, 1, 2, 2) * 5)) == 20
        assert exponent_sum(BraidWord(3)) == 0

    @pytest.mark.parametrize(
        "w,comps",
        [(BraidWord(2, (1,) * 3), 1), (BraidWord(2, (1, 1)), 2), (BraidWord(3, (1, 2) * 3), 3), (BraidWord(4), 4)],
    )
    def test_components(self, w, comps):
        assert closure_components(w) == comps

    def test_betti(self):
        assert betti_number(word(1, 2)) == 0
        assert betti_number(BraidWord(2, (1, 1, 1))) == 2
        for n in range(1, 6):
            assert betti_number(BraidWord(3, (1, 1, 2, 2) * n)) == 4 * n - 2

    def test_betti_counts_unused_generators_as_split(self):
        assert betti_number(BraidWord(4, (1, 1, 3, 3))) == 2

    def test_permutation_of_delta(self):
        assert permutation(word(1, 2, 1)) == [2, 1, 0]

    @given(any_words(max_size=16))
    def test_betti_equals_seifert_size(self, w):
        assert betti_number(w) == seifert_matrix(w).size

    def test_betti_equals_seifert_size_exhaustive(self):
        for n in (2, 3, 4):
            for L in range(0, 8 if n == 4 else 10):
                for w in enumerate_positive_words(n, L):
                    assert betti_number(w) == seifert_matrix(w).size

    def test_syllables(self):
        s = syllables(word(1, 1, 2, 1))
        assert [(x.generator, x.exponent) for x in s] == [(1, 2), (2, 1), (1, 1)]


class TestEnumeration:
    def test_small_lists(self):
        assert [w.letters for w in enumerate_positive_words(3, 2)] == [(1, 1), (1, 2), (2, 1), (2, 2)]
        assert [w.letters for w in enumerate_positive_words(2, 5)] == [(1,) * 5]
        got = [w.letters for w in enumerate_positive_words(3, 3, dedupe_rotation=True)]
        assert got == [(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)]

    @pytest.mark.parametrize("n,L", [(3, 6), (3, 9), (4, 5), (5, 4)])
    def test_counts(self, n, L):
        full = list(enumerate_positive_words(n, L))
        assert len(full) == len(set(full)) == (n - 1) ** L
        reps = list(enumerate_positive_words(n, L, dedupe_rotation=True))
        assert len(reps) == necklaces(n - 1, L)

    def test_dedupe_partitions(self):
        reps = {w.letters for w in enumerate_positive_words(3, 8, dedupe_rotation=True)}
        for w in enumerate_positive_words(3, 8):
            rots = {w.letters[k:] + w.letters[:k] for k in range(8)}
            assert len(rots & reps) == 1


class TestMoves:
    def test_examples(self):
        assert apply_move(word(1, 2, 1), RewriteMove.relation(0)).letters == (2, 1, 2)
        assert apply_move(word(1, 2, 2), RewriteMove.rotate(1)).letters == (2, 2, 1)
        with pytest.raises(InapplicableMove):
            apply_move(word(1, 1, 2), RewriteMove.relation(0))

    def test_commutation_needs_distant_generators(self):
        assert apply_move(word(1, 3, 2), RewriteMove.relation(0)).letters == (3, 1, 2)
        with pytest.raises(InapplicableMove):
            apply_move(word(1, 2, 3), RewriteMove.relation(0))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            RewriteMove("flip", 0)

    @given(any_words(min_size=1, max_size=14), st.data())
    def test_moves_preserve_invariants(self, w, data):
        moves = applicable_moves(w)
        if not moves:
            return
        m = data.draw(st.sampled_from(moves))
        v = apply_move(w, m)
        assert len(v) == len(w)
        assert exponent_sum(v) == exponent_sum(w)
        assert betti_number(v) == betti_number(w)
        assert closure_components(v) == closure_components(w)
        if m.kind == "relation":
            assert permutation(v) == permutation(w)


class TestBfs:
    def test_examples(self):
        assert bfs_equal(word(1, 2, 1), word(2, 1, 2)) is BfsResult.EQUAL
        assert bfs_equal(BraidWord(3, (1, 2) * 3), word(1, 2, 2, 1, 2, 2)) is BfsResult.EQUAL
        assert bfs_equal(word(1, 1, strands=3), word(2, 2), conjugacy=True) is BfsResult.NOT_EQUAL
        assert bfs_equal(word(1, 1, strands=3), word(2, 2)) is BfsResult.NOT_EQUAL

    def test_conjugacy_needs_rotation(self):
        assert bfs_equal(word(1, 1, 2), word(1, 2, 1, strands=3)) is BfsResult.NOT_EQUAL
        assert bfs_equal(word(1, 1, 2), word(1, 2, 1), conjugacy=True) is BfsResult.EQUAL

    def test_budget_reports_exhausted(self):
        a = BraidWord(3, (1, 2, 1) * 4)
        b = BraidWord(3, (2,) + (1, 2, 1) * 3 + (1, 1))
        assert bfs_equal(a, b, step_budget=3) is BfsResult.EXHAUSTED

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            bfs_equal(word(1), word(1, 1))

    def test_classes_partition_words(self):
        # Relation classes of length-6 3-braids: every member reaches every other.
        ws = list(enumerate_positive_words(3, 6))
        cls = {}
        for w in ws:
            for key, rep in cls.items():
                if bfs_equal(w, rep) is BfsResult.EQUAL:
                    break
            else:
                cls[w.letters] = w
        for a, b in itertools.combinations(list(cls.values())[:12], 2):
            assert bfs_equal(a, b) is BfsResult.NOT_EQUAL
