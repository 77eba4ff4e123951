"""Self-checks behind ``braidsig verify``: cross-validations that need no reference data."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .braid import BraidWord, closure_components, enumerate_positive_words
from .burau import alexander_from_burau, alexander_from_seifert, equal_words_b3
from .garside3 import normal_form_3
from .plumbing import check_certificate, delta_expansion, pentafoil_decompose
from .seifert import seifert_matrix
from .signature import signature_batch, torus2_profile


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str
    seconds: float


def _timed(name, fn) -> Check:
    t0 = time.perf_counter()
    ok, detail = fn()
    return Check(name, bool(ok), detail, round(time.perf_counter() - t0, 3))


def _torus(n_max: int, grid: int):
    th = np.arange(1, grid + 1) / (grid + 1)
    bad = 0
    for n in range(2, n_max + 1):
        b = signature_batch(seifert_matrix(BraidWord(2, (1,) * n)), th)
        sig, nul = torus2_profile(n, th)
        keep = ~b.degenerate & (nul == 0)
        bad += int(np.count_nonzero(b.signature[keep] != sig[keep]))
    return bad == 0, f"{bad} mismatches, n <= {n_max}, {grid} angles"


def _alexander(rng, max_len: int, samples: int):
    words = [w for L in range(1, max_len + 1) for w in enumerate_positive_words(3, L)]
    for _ in range(samples):
        n = int(rng.integers(2, 6))
        L = int(rng.integers(1, 15))
        words.append(BraidWord(n, tuple(int(x) for x in rng.integers(1, n, size=L))))
    bad = 0
    checked = 0
    for w in words:
        if set(w.letters) != set(range(1, w.strands)):
            continue
        checked += 1
        if not alexander_from_seifert(seifert_matrix(w)).equivalent(alexander_from_burau(w)):
            bad += 1
    return bad == 0, f"{bad} mismatches among {checked} connected words"


def _identities():
    d = BraidWord(3, (1, 2, 1))
    ok = equal_words_b3(d, BraidWord(3, (2, 1, 2)))
    for k in range(2, 6):
        ok &= equal_words_b3(delta_expansion(k), BraidWord(3, (1, 2, 1) * k))
    for n in range(1, 7):
        lhs = (2,) + (1, 1, 2, 2) * (n - 1) + (1, 1, 2) + (1,) * (2 * n)
        ok &= equal_words_b3(BraidWord(3, lhs), BraidWord(3, (1, 2) * (3 * n)))
    return ok, "Delta spellings and the twist identity"


def _plumbing(rng, max_len: int, samples: int, rand_len: int):
    words = [w for L in range(0, max_len + 1) for w in enumerate_positive_words(3, L)]
    for _ in range(samples):
        L = int(rng.integers(0, rand_len + 1))
        words.append(BraidWord(3, tuple(int(x) for x in rng.integers(1, 3, size=L))))
    bad = sum(not check_certificate(w, pentafoil_decompose(w)) for w in words)
    return bad == 0, f"{bad} invalid certificates among {len(words)} words"


def _nf_invariance(rng, samples: int):
    bad = 0
    for _ in range(samples):
        L = int(rng.integers(1, 25))
        letters = tuple(int(x) for x in rng.integers(1, 3, size=L))
        k = int(rng.integers(0, L))
        if normal_form_3(BraidWord(3, letters)) != normal_form_3(BraidWord(3, letters[k:] + letters[:k])):
            bad += 1
    return bad == 0, f"{bad} rotations changed the normal form"


def _positivity(max_len: int):
    bad = 0
    for L in range(1, max_len + 1):
        for w in enumerate_positive_words(3, L, dedupe_rotation=True):
            if closure_components(w) != 1 or len(w) - 2 <= 0:
                continue
            b = signature_batch(seifert_matrix(w), [0.5])
            if b.signature[0] <= 0:
                bad += 1
    return bad == 0, f"{bad} knots with non-positive classical signature"


def run_checks(seed: int, quick: bool = True) -> list[Check]:
    rng = np.random.default_rng(seed)
    if quick:
        plan = [
            ("torus oracle", lambda: _torus(12, 199)),
            ("alexander cross-check", lambda: _alexander(rng, 7, 50)),
            ("braid identities", _identities),
            ("pentafoil certificates", lambda: _plumbing(rng, 8, 100, 120)),
            ("normal form rotation invariance", lambda: _nf_invariance(rng, 100)),
            ("classical positivity", lambda: _positivity(8)),
        ]
    else:
        plan = [
            ("torus oracle", lambda: _torus(30, 997)),
            ("alexander cross-check", lambda: _alexander(rng, 10, 500)),
            ("braid identities", _identities),
            ("pentafoil certificates", lambda: _plumbing(rng, 12, 1000, 500)),
            ("normal form rotation invariance", lambda: _nf_invariance(rng, 1000)),
            ("classical positivity", lambda: _positivity(10)),
        ]
    return [_timed(name, fn) for name, fn in plan]
