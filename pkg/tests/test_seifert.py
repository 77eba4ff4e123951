import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from braidsig.braid import BraidWord, betti_number, word
from braidsig.burau import alexander_from_burau, alexander_from_seifert
from braidsig.seifert import Brick, brick_basis, seifert_matrix

from .conftest import words


def test_brick_examples():
    assert brick_basis(BraidWord(2, (1, 1, 1))) == (Brick(1, 0, 1), Brick(1, 1, 2))
    assert brick_basis(word(1, 2)) == ()
    assert [b.span for b in brick_basis(BraidWord(3, (1, 2) * 3))] == [(0, 2), (2, 4), (1, 3), (3, 5)]


def test_matrix_examples():
    assert seifert_matrix(BraidWord(2, (1, 1, 1))).matrix.tolist() == [[1, 0], [-1, 1]]
    assert seifert_matrix(BraidWord(2, (1, 1))).matrix.tolist() == [[1]]
    v = seifert_matrix(BraidWord(3, (1, 2) * 3)).matrix
    assert np.all(np.diag(v) == 1)
    sym = v + v.T
    # brick graph of T(3,3) is the path A4
    adj = (sym != 0) & ~np.eye(4, dtype=bool)
    # one chain edge per column plus three interleaved cross pairs; definite
    assert adj.sum() == 2 * 5 and np.all(np.linalg.eigvalsh(sym) > 0)
    assert np.count_nonzero(v[2:, :2]) == 3 and not np.any(v[:2, 2:])


def test_frozen_cycle_example():
    # (s1^2 s2^2)^2 has a cycle in its brick graph; frozen once it matched the Burau polynomial
    w = BraidWord(3, (1, 1, 2, 2) * 2)
    v = seifert_matrix(w).matrix
    assert v.tolist() == [
        [1, 0, 0, 0, 0, 0],
        [-1, 1, 0, 0, 0, 0],
        [0, -1, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, -1, 0, -1, 1, 0],
        [0, 0, 0, 0, -1, 1],
    ]
    assert alexander_from_seifert(v).equivalent(alexander_from_burau(w))


def _later_minus_one(w):
    """Rejected alternative: -1 from every later-starting brick to an interleaved earlier one."""
    bricks = brick_basis(w)
    v = np.eye(len(bricks), dtype=int)
    for i, x in enumerate(bricks):
        for j, y in enumerate(bricks):
            if x.column == y.column and x.start == y.end:
                v[i, j] = -1
            if abs(x.column - y.column) == 1 and y.start < x.start < y.end < x.end:
                v[i, j] = -1
    return v


def test_alternative_sign_rule_is_rejected():
    w = BraidWord(3, (1, 2, 1, 2, 1))
    assert alexander_from_seifert(seifert_matrix(w)).equivalent(alexander_from_burau(w))
    assert not alexander_from_seifert(_later_minus_one(w)).equivalent(alexander_from_burau(w))


def test_json_and_grid():
    s = seifert_matrix(BraidWord(2, (1, 1, 1)))
    assert '"matrix": [[1, 0], [-1, 1]]' in s.to_json()
    assert s.grid().splitlines() == [" 1  0", "-1  1"]
    assert seifert_matrix(word(1, 2)).grid() == "(empty)"


@given(st.integers(2, 5).flatmap(lambda n: words(n, max_size=18)))
def test_size_is_betti(w):
    assert seifert_matrix(w).size == betti_number(w)


@given(st.integers(2, 5).flatmap(lambda n: words(n, max_size=18)))
def test_column_blocks_are_cartan(w):
    s = seifert_matrix(w)
    sym = s.matrix + s.matrix.T
    cols = np.array([b.column for b in s.bricks])
    for c in set(cols.tolist()):
        idx = np.flatnonzero(cols == c)
        block = sym[np.ix_(idx, idx)]
        k = idx.size
        cartan = 2 * np.eye(k, dtype=int) - np.eye(k, k, 1, dtype=int) - np.eye(k, k, -1, dtype=int)
        assert np.array_equal(block, cartan)


@given(st.integers(1, 4), st.integers(1, 4))
def test_far_columns_do_not_interact(a, b):
    w = BraidWord(5, (1,) * (a + 1) + (3,) * (b + 1) + (1, 3) * 2)
    s = seifert_matrix(w)
    cols = np.array([bk.column for bk in s.bricks])
    assert not np.any(s.matrix[np.ix_(cols == 1, cols == 3)])
    assert not np.any(s.matrix[np.ix_(cols == 3, cols == 1)])


@given(words(3, max_size=10), words(3, max_size=10))
def test_split_words_give_block_diagonal(a, b):
    w = BraidWord(6, a.letters + tuple(g + 3 for g in b.letters))
    s = seifert_matrix(w)
    left = np.array([bk.column <= 2 for bk in s.bricks], dtype=bool)
    assert not np.any(s.matrix[np.ix_(left, ~left)]) and not np.any(s.matrix[np.ix_(~left, left)])
    assert np.array_equal(s.matrix[np.ix_(left, left)], seifert_matrix(a).matrix.reshape(left.sum(), left.sum()))


def test_rotation_invariant_alexander_form():
    w = BraidWord(3, (1, 1, 2, 1, 2, 2, 2, 1))
    ref = alexander_from_seifert(seifert_matrix(w))
    for k in range(len(w)):
        r = BraidWord(3, w.letters[k:] + w.letters[:k])
        assert alexander_from_seifert(seifert_matrix(r)).equivalent(ref)
