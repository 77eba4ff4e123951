"""Levine-Tristram signatures through the Hermitian form of a Seifert matrix."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .braid import BraidWord
from .seifert import seifert_matrix

DEFAULT_REL_TOL = 1e-9
GUARD_FACTOR = 10.0


@dataclass(frozen=True)
class SignatureQuery:
    theta: float

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must lie strictly between 0 and 1, got {self.theta!r}")

    @property
    def omega(self) -> complex:
        angle = 2.0 * math.pi * self.theta
        return complex(math.cos(angle), math.sin(angle))


@dataclass(frozen=True)
class SignatureResult:
    signature: int
    nullity: int
    margin: float


class IllConditioned(ArithmeticError):
    """An eigenvalue sits inside the guard band just above the null threshold."""

    def __init__(self, result: SignatureResult, eigenvalue: float, threshold: float):
        self.result = result
        self.eigenvalue = eigenvalue
        self.threshold = threshold
        super().__init__(
            f"eigenvalue {eigenvalue:.3e} within {GUARD_FACTOR:g}x of null threshold {threshold:.3e}"
        )


def _as_query(q) -> SignatureQuery:
    return q if isinstance(q, SignatureQuery) else SignatureQuery(float(q))


def hermitian_form(v, q) -> np.ndarray:
    """``(1 - w) V + (1 - conj(w)) V^T``; built as ``A + A^H`` so it is exactly Hermitian."""
    q = _as_query(q)
    arr = np.asarray(getattr(v, "matrix", v), dtype=np.float64)
    if arr.size == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    a = (1.0 - q.omega) * arr
    return a + a.conj().T


def inertia(m: np.ndarray, rel_tol: float = DEFAULT_REL_TOL) -> SignatureResult:
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    m = np.asarray(m)
    if m.size == 0:
        return SignatureResult(0, 0, 1.0)
    eig = np.linalg.eigvalsh(m)
    norm = float(np.max(np.abs(eig)))
    threshold = rel_tol * norm
    mags = np.abs(eig)
    null = mags <= threshold
    pos = int(np.count_nonzero(eig[~null] > 0))
    neg = int(np.count_nonzero(eig[~null] < 0))
    live = mags[~null]
    margin = float(live.min() / norm) if live.size else 1.0
    result = SignatureResult(pos - neg, int(np.count_nonzero(null)), margin)
    guard = live <= GUARD_FACTOR * threshold
    if np.any(guard):
        raise IllConditioned(result, float(live[guard].min()), threshold)
    return result


def levine_tristram(w: BraidWord, q, rel_tol: float = DEFAULT_REL_TOL) -> SignatureResult:
    return inertia(hermitian_form(seifert_matrix(w), q), rel_tol)


def torus2_signature(n: int, q, tol: float = 1e-12) -> SignatureResult:
    """Closed form for the closure of ``sigma_1^n``: sum of signs of ``sin(pi theta) - cos(k pi / n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    q = _as_query(q)
    sig, nul = kernels.torus2_counts(n, np.array([q.theta]), tol)
    s = math.sin(math.pi * q.theta)
    gaps = [abs(s - math.cos(k * math.pi / n)) for k in range(1, n)]
    live = [g for g in gaps if g > tol]
    margin = min(live) / max(live) if live else 1.0
    return SignatureResult(int(sig[0]), int(nul[0]), margin)


def torus2_profile(n: int, thetas: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    return kernels.torus2_counts(n, np.asarray(thetas, dtype=np.float64), tol)


@dataclass(frozen=True)
class SignatureBatch:
    thetas: np.ndarray
    signature: np.ndarray
    nullity: np.ndarray
    margin: np.ndarray
    ill_conditioned: np.ndarray

    @property
    def degenerate(self) -> np.ndarray:
        return (self.nullity > 0) | self.ill_conditioned


_BATCH_ELEMENTS = 1 << 22


def signature_batch(v, thetas, rel_tol: float = DEFAULT_REL_TOL) -> SignatureBatch:
    """Signature data of one Seifert matrix at many angles, with the same rules as :func:`inertia`."""
    th = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    if np.any((th <= 0) | (th >= 1)):
        raise ValueError("every theta must lie strictly between 0 and 1")
    arr = np.asarray(getattr(v, "matrix", v), dtype=np.float64)
    g = th.size
    m = arr.shape[0] if arr.size else 0
    if m == 0:
        z = np.zeros(g, dtype=np.int64)
        return SignatureBatch(th, z, z.copy(), np.ones(g), np.zeros(g, dtype=bool))
    sig = np.empty(g, dtype=np.int64)
    nul = np.empty(g, dtype=np.int64)
    margin = np.empty(g)
    ill = np.empty(g, dtype=bool)
    step = max(1, _BATCH_ELEMENTS // (m * m))
    for lo in range(0, g, step):
        sl = slice(lo, min(g, lo + step))
        om = np.exp(2j * np.pi * th[sl])
        a = (1.0 - om)[:, None, None] * arr[None, :, :]
        eig = np.linalg.eigvalsh(a + np.conj(np.swapaxes(a, 1, 2)))
        mags = np.abs(eig)
        norm = mags.max(axis=1)
        thr = rel_tol * norm
        null = mags <= thr[:, None]
        sig[sl] = np.count_nonzero((eig > 0) & ~null, axis=1) - np.count_nonzero((eig < 0) & ~null, axis=1)
        nul[sl] = np.count_nonzero(null, axis=1)
        live = np.where(null, np.inf, mags)
        low = live.min(axis=1)
        ok = np.isfinite(low) & (norm > 0)
        margin[sl] = np.where(ok, low / np.where(norm > 0, norm, 1.0), 1.0)
        ill[sl] = np.any(live <= GUARD_FACTOR * thr[:, None], axis=1)
    return SignatureBatch(th, sig, nul, margin, ill)


@dataclass(frozen=True)
class ProfileSample:
    theta: float
    signature: int
    nullity: int
    margin: float
    ill_conditioned: bool = False

    @property
    def omega(self) -> complex:
        return SignatureQuery(self.theta).omega


def profile_thetas(grid: int) -> np.ndarray:
    if grid < 2:
        raise ValueError("grid must be at least 2")
    return np.arange(1, grid + 1) / (grid + 1)


def signature_profile(
    w: BraidWord, grid: int, rel_tol: float = DEFAULT_REL_TOL, thetas: Iterable[float] | None = None
) -> list[ProfileSample]:
    """Samples at ``theta = j / (grid + 1)``, ``j = 1..grid`` (or at explicit ``thetas``)."""
    points = profile_thetas(grid) if thetas is None else np.asarray(list(thetas), dtype=np.float64)
    b = signature_batch(seifert_matrix(w), points, rel_tol)
    return [
        ProfileSample(float(t), int(s), int(n), float(m), bool(i))
        for t, s, n, m, i in zip(b.thetas, b.signature, b.nullity, b.margin, b.ill_conditioned)
    ]


PROFILE_HEADER = ("theta", "omega_re", "omega_im", "signature", "nullity", "margin")


def profile_csv(samples: Iterable[ProfileSample]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(PROFILE_HEADER)
    for s in samples:
        om = s.omega
        out.writerow([repr(s.theta), repr(om.real), repr(om.imag), s.signature, s.nullity, repr(s.margin)])
    return buf.getvalue()
