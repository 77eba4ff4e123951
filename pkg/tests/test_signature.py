import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from braidsig.braid import BraidWord, betti_number, word
from braidsig.seifert import seifert_matrix
from braidsig.signature import (
    PROFILE_HEADER,
    IllConditioned,
    SignatureResult,
    SignatureQuery,
    hermitian_form,
    inertia,
    levine_tristram,
    profile_csv,
    signature_batch,
    signature_profile,
    torus2_profile,
    torus2_signature,
)

from . import exact
from .conftest import any_words, words


def sn(r):
    return r.signature, r.nullity


class TestForm:
    def test_examples(self):
        assert np.allclose(hermitian_form([[1]], 0.5), [[4]])
        assert hermitian_form(np.zeros((0, 0)), 0.3).shape == (0, 0)
        assert np.allclose(hermitian_form([[1, 0], [-1, 1]], 0.5), [[4, -2], [-2, 4]])

    @given(any_words(max_size=14), st.floats(0.01, 0.99))
    def test_exactly_hermitian(self, w, theta):
        m = hermitian_form(seifert_matrix(w), theta)
        assert np.array_equal(m, m.conj().T)

    def test_query_validation(self):
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                SignatureQuery(bad)
        assert SignatureQuery(0.25).omega == pytest.approx(1j)


class TestInertia:
    def test_examples(self):
        assert sn(inertia(np.array([[4.0]]))) == (1, 0)
        assert sn(inertia(np.array([[4.0, -2], [-2, 4]]))) == (2, 0)
        assert sn(inertia(np.zeros((1, 1)))) == (0, 1)
        assert inertia(np.zeros((0, 0))) == SignatureResult(0, 0, 1.0)

    def test_guard_band(self):
        m = np.diag([1.0, 5e-9])
        with pytest.raises(IllConditioned) as exc:
            inertia(m, rel_tol=1e-9)
        assert exc.value.result.signature == 2
        assert inertia(m, rel_tol=1e-10).signature == 2
        assert inertia(np.diag([1.0, 1e-12])).nullity == 1

    def test_margin(self):
        r = inertia(np.diag([4.0, -1.0]))
        assert r.margin == pytest.approx(0.25)

    def test_rel_tol_positive(self):
        with pytest.raises(ValueError):
            inertia(np.eye(2), rel_tol=0)


class TestExamples:
    def test_trefoil(self):
        assert sn(levine_tristram(BraidWord(2, (1, 1, 1)), 0.5)) == (2, 0)
        assert sn(levine_tristram(BraidWord(2, (1, 1, 1)), 0.10)) == (0, 0)

    def test_t33_definite(self):
        assert levine_tristram(BraidWord(3, (1, 2) * 3), 0.5).signature == 4

    def test_torus_closed_form(self):
        assert torus2_signature(3, 0.5).signature == 2
        assert torus2_signature(7, 0.35).signature == 4
        for th in np.linspace(0.34, 0.66, 17):
            assert torus2_signature(5, th).signature == 4
            assert torus2_signature(6, th).signature == 5

    def test_unknot_profile(self):
        prof = signature_profile(word(1, 2), 9)
        assert all(s.signature == 0 and s.nullity == 0 for s in prof)

    def test_trefoil_profile(self):
        prof = signature_profile(BraidWord(2, (1, 1, 1)), 11)
        for s in prof:
            if math.isclose(s.theta, 1 / 6) or math.isclose(s.theta, 5 / 6):
                assert s.nullity == 1
                continue
            expected = 0 if s.theta < 1 / 6 or s.theta > 5 / 6 else 2
            assert (s.signature, s.nullity) == (expected, 0)

    def test_family_peak_near_one_third(self):
        w = BraidWord(3, (1, 1, 2, 2) * 10)
        prof = signature_profile(w, 599)
        top = max(s.signature for s in prof)
        near = min(prof, key=lambda s: abs(s.theta - 1 / 3))
        assert near.signature == top
        assert abs(top / betti_number(w) - 2 / 3) <= 0.05


class TestOracles:
    @given(words(3, max_size=12))
    def test_classical_matches_exact(self, w):
        v = seifert_matrix(w).matrix
        res = levine_tristram(w, 0.5)
        assert (res.signature, res.nullity) == exact.classical(v)

    @given(any_words(max_strands=4, max_size=10))
    def test_quarter_turn_matches_exact(self, w):
        v = seifert_matrix(w).matrix
        res = levine_tristram(w, 0.25)
        assert (res.signature, res.nullity) == exact.quarter(v)

    @pytest.mark.parametrize("n", range(2, 16))
    def test_torus_grid(self, n):
        th = np.arange(1, 398) / 398
        b = signature_batch(seifert_matrix(BraidWord(2, (1,) * n)), th)
        sig, nul = torus2_profile(n, th)
        keep = ~b.degenerate & (nul == 0)
        assert np.array_equal(b.signature[keep], sig[keep])
        assert np.array_equal(b.nullity > 0, nul > 0)


class TestProperties:
    @given(any_words(max_size=16), st.floats(0.01, 0.99))
    def test_rank_and_parity(self, w, theta):
        b = signature_batch(seifert_matrix(w), [theta])
        s, z = int(b.signature[0]), int(b.nullity[0])
        b1 = betti_number(w)
        assert abs(s) + z <= b1
        assert (s - (b1 - z)) % 2 == 0

    @given(any_words(max_size=16), st.integers(1, 49))
    def test_theta_symmetry(self, w, j):
        b = signature_batch(seifert_matrix(w), [j / 100, 1 - j / 100])
        assert b.signature[0] == b.signature[1] and b.nullity[0] == b.nullity[1]

    @given(words(3, min_size=1, max_size=14), st.data(), st.floats(0.02, 0.98))
    def test_rotation_invariance(self, w, data, theta):
        k = data.draw(st.integers(0, len(w) - 1))
        r = BraidWord(3, w.letters[k:] + w.letters[:k])
        a = signature_batch(seifert_matrix(w), [theta])
        b = signature_batch(seifert_matrix(r), [theta])
        assert (a.signature[0], a.nullity[0]) == (b.signature[0], b.nullity[0])

    @given(words(3, max_size=10), words(3, max_size=10), st.floats(0.02, 0.98))
    def test_split_additivity(self, a, b, theta):
        w = BraidWord(6, a.letters + tuple(g + 3 for g in b.letters))
        parts = [signature_batch(seifert_matrix(x), [theta]) for x in (a, b)]
        whole = signature_batch(seifert_matrix(w), [theta])
        assume(not whole.degenerate[0])
        assert whole.signature[0] == sum(p.signature[0] for p in parts)

    @given(any_words(max_size=12), st.lists(st.floats(0.01, 0.99), min_size=1, max_size=6))
    def test_batch_matches_single(self, w, thetas):
        b = signature_batch(seifert_matrix(w), thetas)
        for i, th in enumerate(thetas):
            try:
                r = levine_tristram(w, th)
                assert not b.ill_conditioned[i]
            except IllConditioned as exc:
                r = exc.result
                assert b.ill_conditioned[i]
            assert (r.signature, r.nullity) == (b.signature[i], b.nullity[i])
            assert r.margin == pytest.approx(b.margin[i], rel=1e-9, abs=1e-12)

    def test_sigma_bounded_by_twice_b1(self):
        w = BraidWord(3, (1, 1, 2, 2) * 6)
        prof = signature_profile(w, 199)
        assert all(abs(s.signature) <= 2 * betti_number(w) for s in prof)


def test_profile_csv_round_trips_floats():
    prof = signature_profile(BraidWord(2, (1, 1, 1)), 3)
    lines = profile_csv(prof).splitlines()
    assert tuple(lines[0].split(",")) == PROFILE_HEADER
    assert float(lines[1].split(",")[0]) == prof[0].theta
    assert lines[2].split(",")[3:5] == ["2", "0"]


def test_torus_margin_and_validation():
    r = torus2_signature(3, 1 / 6)
    assert r.nullity == 1
    with pytest.raises(ValueError):
        torus2_signature(0, 0.5)
    assert math.isclose(torus2_signature(1, 0.3).margin, 1.0)
