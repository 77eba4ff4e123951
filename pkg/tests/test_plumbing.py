import json

import numpy as np
import pytest
from hypothesis import given

from braidsig.braid import BraidWord, betti_number, enumerate_positive_words, parse_braid
from braidsig.burau import equal_words_b3
from braidsig.garside3 import GarsideNF3, normal_form_3
from braidsig.kernels import OP_RELATION, OP_REMOVE, OP_ROTATE
from braidsig.plumbing import (
    MAX_BASE_LENGTH,
    CaseTag,
    Decomposition,
    check_certificate,
    delta_expansion,
    inverse_certificate,
    pentafoil_decompose,
    replay,
    validate_insertions,
)

from .conftest import words

EXCEPTIONAL = {
    GarsideNF3(3),
    GarsideNF3(2),
    GarsideNF3.from_exponents(2, [1]),
    GarsideNF3.from_exponents(2, [1, 1]),
}


def assert_structure(w, d):
    assert len(d.base) <= MAX_BASE_LENGTH
    ins = d.insertions
    small = [i for i, x in enumerate(ins) if x.power < 4]
    assert len(small) <= 1
    if small:
        assert small[0] == len(ins) - 1 and ins[-1].power in (2, 3) and ins[-1].is_final_small
    assert len(d.base) + sum(x.power for x in ins) == len(w)
    assert check_certificate(w, d)


class TestDeltaExpansion:
    def test_spellings(self):
        assert delta_expansion(1).letters == (1, 2, 1)
        assert delta_expansion(3).letters == (1, 2, 2, 1, 1, 2, 1, 1, 1)
        assert delta_expansion(4).letters == (1, 2, 2, 1, 1, 2, 2, 1, 2, 2, 2, 2)

    @pytest.mark.parametrize("n", range(1, 6))
    @pytest.mark.parametrize("lead", [1, 2])
    def test_equal_to_delta_power(self, n, lead):
        w = delta_expansion(n, lead)
        assert w.letters[0] == lead
        assert equal_words_b3(w, BraidWord(3, (1, 2, 1) * n))
        assert w.letters[-n:] == (w.letters[-1],) * n

    def test_range(self):
        with pytest.raises(ValueError):
            delta_expansion(6)


class TestExamples:
    def test_family_three(self):
        w = parse_braid("1^2 2^2 1^2 2^2 1^2 2^2")
        d = pentafoil_decompose(w)
        assert d.base.letters == (2, 2)
        ins = d.insertions
        assert [(x.generator, x.power) for x in ins] == [(1, 4), (2, 4), (1, 2)]
        assert ins[-1].is_final_small
        assert d.tags[0] is CaseTag.MIDDLE_REMOVAL
        assert_structure(w, d)

    @pytest.mark.parametrize("text", ["1 2 1 1 2 1 1", "1 2 1 1 2 1 2", "1 2 1 1 2 1", "1 2 1 1 2 1 1 2 1"])
    def test_exceptional(self, text):
        w = parse_braid(text, 3)
        d = pentafoil_decompose(w)
        assert d.insertions == () and d.tags == (CaseTag.EXCEPTIONAL,)
        assert normal_form_3(d.base) in EXCEPTIONAL

    def test_nine_power(self):
        w = BraidWord(3, (1,) * 9)
        d = pentafoil_decompose(w)
        assert d.base.letters == (1,)
        assert [(x.generator, x.power) for x in d.insertions] == [(1, 4), (1, 4)]
        assert d.tags.count(CaseTag.CONDITION_5) == 2

    def test_whole_syllable_up_to_six(self):
        d = pentafoil_decompose(parse_braid("1^6 2^2 1^2 2^2", 3))
        assert [(x.generator, x.power) for x in d.insertions] == [(2, 4), (1, 6)]
        d = pentafoil_decompose(parse_braid("1^7 2^2 1^2 2^2", 3))
        assert [x.power for x in d.insertions] == [4]
        assert CaseTag.PARTIAL_POWER in d.tags

    def test_short_words_are_their_own_base(self):
        w = parse_braid("1^2 2^3 1^2 2^2", 3)
        d = pentafoil_decompose(w)
        assert d.insertions == () and len(d.base) <= 9 and check_certificate(w, d)

    def test_rejects_other_strand_counts(self):
        with pytest.raises(ValueError):
            pentafoil_decompose(BraidWord(4, (1, 2, 3)))


class TestCertificates:
    def test_replay_recovers_original(self):
        w = parse_braid("1^2 2^2 1^2 2^2 1^2 2^2")
        d = pentafoil_decompose(w)
        assert replay(d) == w

    def test_no_insertions(self):
        w = parse_braid("1 2^2", 3)
        d = pentafoil_decompose(w)
        assert replay(d).letters == w.letters
        empty = Decomposition(len(w), w, np.zeros((0, 4), dtype=np.int64))
        assert check_certificate(w, empty)

    def test_json_round_trip(self):
        w = parse_braid("1^5 2^3 1 2^7 1^2 2^2 1^3", 3)
        d = pentafoil_decompose(w)
        e = Decomposition.from_json(d.to_json())
        assert e.base == d.base and e.tags == d.tags
        assert np.array_equal(e.certificate, d.certificate)
        data = json.loads(d.to_json())
        assert data["schema"] == "braidsig.certificate/1"
        assert {s["op"] for s in data["steps"]} <= {"rotate", "relation", "remove"}

    def test_bad_schema(self):
        with pytest.raises(ValueError):
            Decomposition.from_json('{"schema": "other", "steps": []}')

    def test_tampered_power(self):
        w = parse_braid("1^2 2^2 1^2 2^2 1^2 2^2")
        d = pentafoil_decompose(w)
        cert = d.certificate.copy()
        rem = np.flatnonzero(cert[:, 0] == OP_REMOVE)
        last = rem[-1]
        cert[last, 3] = 3
        bad = Decomposition(d.original_length, d.base, cert, d.tags)
        with pytest.raises(ValueError):
            validate_insertions(bad)
        with pytest.raises(ValueError):
            replay(bad)
        assert not check_certificate(w, bad)

    def test_shifted_relation_fails_at_that_step(self):
        w = parse_braid("1 2 1 1 2 1 1 2 1 1 2 1 2^4 1 2", 3)
        d = pentafoil_decompose(w)
        cert = d.certificate.copy()
        rel = np.flatnonzero(cert[:, 0] == OP_RELATION)
        assert rel.size
        for i in rel:
            broken = cert.copy()
            broken[i, 1] += 1
            res = check_certificate(w, Decomposition(d.original_length, d.base, broken, d.tags))
            if not res:
                assert res.failed_step is None or res.failed_step >= i
                return
        pytest.fail("no shifted relation was detected")

    def test_wrong_original(self):
        w = parse_braid("1^5 2^5", 3)
        d = pentafoil_decompose(w)
        assert not check_certificate(parse_braid("1^4 2^6", 3), d)
        assert not check_certificate(parse_braid("1^5 2^4", 3), d)

    def test_inverse_certificate_shape(self):
        d = pentafoil_decompose(parse_braid("1^7 2^3 1 2", 3))
        inv = inverse_certificate(d)
        assert inv.shape == d.certificate.shape
        assert set(inv[:, 0].tolist()) <= {OP_ROTATE, OP_RELATION, 3}

    @given(words(3, max_size=160))
    def test_random_structure(self, w):
        d = pentafoil_decompose(w)
        assert_structure(w, d)
        assert replay(d) == w

    def test_exhaustive_small(self):
        bases = set()
        for L in range(0, 12):
            for w in enumerate_positive_words(3, L):
                d = pentafoil_decompose(w)
                assert_structure(w, d)
                if CaseTag.EXCEPTIONAL in d.tags:
                    bases.add(normal_form_3(d.base))
        assert bases == EXCEPTIONAL

    def test_removals_shrink_and_betti_accounts(self):
        w = parse_braid("1^3 2^5 1^2 2^2 1^4 2 1^2 2^3", 3)
        d = pentafoil_decompose(w)
        lengths = [len(w)]
        for op, _p, _g, e in d.certificate.tolist():
            if op == OP_REMOVE:
                lengths.append(lengths[-1] - e)
        assert all(b < a for a, b in zip(lengths, lengths[1:]))
        assert lengths[-1] == len(d.base)
        # each inserted power p adds p crossings; a generator absent from the base adds one strand
        lost = len(set(w.letters)) - len(set(d.base.letters))
        assert betti_number(w) - betti_number(d.base) == sum(x.power for x in d.insertions) - lost
