"""Desk-scale experiments on signature ratios of positive braids.

All scans are deterministic: words are processed in a fixed order, minima are
merged with ties broken by the word text, and random words come from a seeded
:class:`numpy.random.Generator`.  ``workers > 1`` farms chunks out to worker
processes and merges the results in submission order, so the output does not
depend on the worker count.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .braid import BraidWord, betti_number, enumerate_positive_words, format_braid
from .seifert import seifert_matrix
from .signature import DEFAULT_REL_TOL, signature_batch, torus2_signature


def _chunks(items: Sequence, size: int) -> list[Sequence]:
    return [items[i:i + size] for i in range(0, len(items), size)]


def _ordered_map(fn: Callable, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _random_words(rng: np.random.Generator, n: int, length: int, count: int, need_all: bool) -> list[BraidWord]:
    out = []
    while len(out) < count:
        letters = rng.integers(1, n, size=length)
        if need_all and np.unique(letters).size < n - 1:
            continue
        out.append(BraidWord(n, tuple(int(x) for x in letters)))
    return out


# --------------------------------------------------------------------------
# sweep rows


@dataclass(frozen=True)
class SweepRow:
    word: str
    length: int
    b1: int
    theta: float
    signature: int
    nullity: int
    ratio: float | None
    flags: str = ""


SWEEP_HEADER = ("word", "length", "b1", "theta", "signature", "nullity", "ratio", "flags")


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(SWEEP_HEADER)
    for r in rows:
        out.writerow(
            [r.word, r.length, r.b1, repr(r.theta), r.signature, r.nullity,
             "" if r.ratio is None else repr(r.ratio), r.flags]
        )
    return buf.getvalue()


def _rows_for_word(w: BraidWord, thetas: np.ndarray, rel_tol: float) -> list[SweepRow]:
    b1 = betti_number(w)
    batch = signature_batch(seifert_matrix(w), thetas, rel_tol)
    text = format_braid(w)
    rows = []
    for t, s, nul, ill in zip(batch.thetas, batch.signature, batch.nullity, batch.ill_conditioned):
        flags = []
        if nul:
            flags.append("degenerate")
        if ill:
            flags.append("ill_conditioned")
        ratio = float(s) / b1 if b1 > 0 else None
        rows.append(SweepRow(text, len(w), b1, float(t), int(s), int(nul), ratio, ";".join(flags)))
    return rows


# --------------------------------------------------------------------------
# ratio scan


@dataclass(frozen=True)
class BandMinimum:
    b1: int
    min_ratio: float
    word: str
    count: int


@dataclass
class RatioReport:
    theta: float
    n: int
    max_length: int
    b1_min: int
    per_b1: dict[int, BandMinimum] = field(default_factory=dict)
    minimum: float | None = None
    argmin: str | None = None
    liminf_estimate: float | None = None
    liminf_band: tuple[int, int] | None = None
    words_scanned: int = 0
    words_used: int = 0
    degenerate: int = 0
    degenerate_words: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_b1"] = [asdict(v) for _, v in sorted(self.per_b1.items())]
        d["version"] = __version__
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _better(ratio: float, word: str, cur: BandMinimum | None) -> bool:
    return cur is None or (ratio, word) < (cur.min_ratio, cur.word)


def _scan_chunk(job) -> tuple[dict, int, int, list[str], int]:
    words, theta, b1_min, rel_tol = job
    per: dict[int, BandMinimum] = {}
    used = 0
    degenerate: list[str] = []
    for w in words:
        b1 = betti_number(w)
        if b1 < b1_min or b1 == 0:
            continue
        batch = signature_batch(seifert_matrix(w), [theta], rel_tol)
        text = format_braid(w)
        if batch.degenerate[0]:
            degenerate.append(text)
            continue
        used += 1
        r = int(batch.signature[0]) / b1
        cur = per.get(b1)
        count = (cur.count if cur else 0) + 1
        if _better(r, text, cur):
            per[b1] = BandMinimum(b1, r, text, count)
        else:
            per[b1] = BandMinimum(b1, cur.min_ratio, cur.word, count)
    return per, len(words), used, degenerate, 0


def _merge_bands(parts: Iterable[dict]) -> dict[int, BandMinimum]:
    merged: dict[int, BandMinimum] = {}
    for part in parts:
        for b1, band in part.items():
            cur = merged.get(b1)
            if cur is None:
                merged[b1] = band
                continue
            count = cur.count + band.count
            best = band if (band.min_ratio, band.word) < (cur.min_ratio, cur.word) else cur
            merged[b1] = BandMinimum(b1, best.min_ratio, best.word, count)
    return merged


def scan_words(n: int, max_length: int, min_length: int = 1) -> list[BraidWord]:
    """Rotation representatives of every positive word with length in the given range."""
    out: list[BraidWord] = []
    for length in range(min_length, max_length + 1):
        out.extend(enumerate_positive_words(n, length, dedupe_rotation=True))
    return out


def ratio_scan(
    n: int,
    L: int,
    theta: float,
    b1_min: int = 1,
    rel_tol: float = DEFAULT_REL_TOL,
    workers: int = 1,
    chunk: int = 4096,
) -> RatioReport:
    if n < 2 or L < 1 or not 0 < theta < 1:
        raise ValueError("need n >= 2, L >= 1 and 0 < theta < 1")
    words = scan_words(n, L)
    jobs = [(c, theta, b1_min, rel_tol) for c in _chunks(words, chunk)]
    parts = _ordered_map(_scan_chunk, jobs, workers)
    rep = RatioReport(theta, n, L, b1_min)
    rep.per_b1 = _merge_bands(p[0] for p in parts)
    rep.words_scanned = sum(p[1] for p in parts)
    rep.words_used = sum(p[2] for p in parts)
    degenerate = [w for p in parts for w in p[3]]
    rep.degenerate = len(degenerate)
    rep.degenerate_words = degenerate
    if rep.per_b1:
        best = min(rep.per_b1.values(), key=lambda b: (b.min_ratio, b.word))
        rep.minimum, rep.argmin = best.min_ratio, best.word
        lo, hi = min(rep.per_b1), max(rep.per_b1)
        cut = lo + math.ceil(2 * (hi - lo) / 3)
        band = [b for k, b in rep.per_b1.items() if k >= cut]
        rep.liminf_estimate = min(b.min_ratio for b in band)
        rep.liminf_band = (cut, hi)
    return rep


def sweep_rows(n: int, L: int, thetas: Sequence[float], b1_min: int = 0, rel_tol: float = DEFAULT_REL_TOL) -> list[SweepRow]:
    th = np.asarray(thetas, dtype=np.float64)
    rows: list[SweepRow] = []
    for w in scan_words(n, L):
        if betti_number(w) >= b1_min:
            rows.extend(_rows_for_word(w, th, rel_tol))
    return rows


# --------------------------------------------------------------------------
# families


FAMILIES = {
    "s1s1s2s2": lambda k: BraidWord(3, (1, 1, 2, 2) * k),
    "twist": lambda k: BraidWord(3, (1, 2) * (3 * k)),
    "torus2": lambda k: BraidWord(2, (1,) * k),
}


def family_member(family: str, k: int) -> BraidWord:
    try:
        return FAMILIES[family](k)
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None


def family_scan(
    family: str,
    n_max: int,
    grid: int | None = None,
    thetas: Sequence[float] | None = None,
    n_min: int = 1,
    rel_tol: float = DEFAULT_REL_TOL,
) -> list[SweepRow]:
    """Rows for every member ``n_min..n_max`` of a family at each sample angle."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if thetas is None:
        if grid is None:
            raise ValueError("give either grid or thetas")
        th = np.arange(1, grid + 1) / (grid + 1)
    else:
        th = np.asarray(thetas, dtype=np.float64)
    rows: list[SweepRow] = []
    for k in range(n_min, n_max + 1):
        rows.extend(_rows_for_word(family_member(family, k), th, rel_tol))
    return rows


# --------------------------------------------------------------------------
# quasi-linearity


@dataclass
class GGReport:
    k: int
    grid: int
    seed: int
    lengths: list[int]
    max_deviation: dict[int, float]
    mean_deviation: dict[int, float]
    within_literal: dict[int, float]
    skipped_points: int
    verdict: bool

    def to_json(self) -> str:
        d = asdict(self)
        d["version"] = __version__
        return json.dumps(d, sort_keys=True)


def gg_deviation(w: BraidWord, k: int, grid: int, rel_tol: float = DEFAULT_REL_TOL) -> tuple[float, int]:
    """``max |sigma_theta - 2 lk theta|`` over ``theta = j / (k (grid+1))``; also the skipped count."""
    th = np.arange(1, grid + 1) / (k * (grid + 1))
    batch = signature_batch(seifert_matrix(w), th, rel_tol)
    ok = ~batch.degenerate
    if not ok.any():
        return 0.0, int(th.size)
    dev = np.abs(batch.signature[ok] - 2.0 * len(w) * th[ok])
    return float(dev.max()), int(np.count_nonzero(~ok))


def gg_check(
    k: int = 3,
    length_list: Sequence[int] = (10, 20, 40),
    samples_per_length: int = 200,
    grid: int = 60,
    seed: int = 0,
) -> GGReport:
    if k < 3:
        raise ValueError("k must be at least 3")
    rng = np.random.default_rng(seed)
    maxdev: dict[int, float] = {}
    meandev: dict[int, float] = {}
    literal: dict[int, float] = {}
    skipped = 0
    for length in length_list:
        devs = []
        for w in _random_words(rng, k, length, samples_per_length, need_all=False):
            d, s = gg_deviation(w, k, grid)
            devs.append(d)
            skipped += s
        maxdev[length] = max(devs)
        meandev[length] = float(np.mean(devs))
        literal[length] = float(np.mean([d <= k - 1 for d in devs]))
    lo, hi = min(length_list), max(length_list)
    verdict = maxdev[hi] <= maxdev[lo] + 2
    return GGReport(k, grid, seed, list(length_list), maxdev, meandev, literal, skipped, verdict)


# --------------------------------------------------------------------------
# smoothing into k-braids


def smoothing_ranges(n: int, k: int, r: int) -> list[tuple[int, int]]:
    """Strand blocks (1-based, inclusive) left after cutting every generator index congruent to ``r``."""
    blocks = []
    lo = 1
    for i in range(1, n):
        if i % k == r:
            blocks.append((lo, i))
            lo = i + 1
    blocks.append((lo, n))
    return blocks


def smoothing_split(w: BraidWord, k: int) -> tuple[list[BraidWord], int]:
    """Delete the cheapest residue class of generators mod ``k``; return the k-braid blocks and the cut count."""
    if k < 2:
        raise ValueError("k must be at least 2")
    n = w.strands
    if k >= n:
        return [w], 0
    letters = np.asarray(w.letters, dtype=np.int64)
    counts = [int(np.count_nonzero(letters % k == r)) for r in range(k)]
    r = int(np.argmin(counts))
    blocks = []
    for lo, hi in smoothing_ranges(n, k, r):
        if hi - lo + 1 < 2:
            continue
        sel = letters[(letters >= lo) & (letters < hi)] - lo + 1
        blocks.append(BraidWord(hi - lo + 1, tuple(int(x) for x in sel)))
    return blocks, counts[r]


@dataclass(frozen=True)
class SmoothingCheck:
    passed: bool
    margin: float
    signature: int
    block_signature: int
    removed: int
    slack: int
    degenerate: bool


def smoothing_inequality_check(w: BraidWord, k: int, theta: float, rel_tol: float = DEFAULT_REL_TOL) -> SmoothingCheck:
    """``sigma(w) >= sum sigma(blocks) - removed - (n - 1)``; the margin is the left side minus the right."""
    blocks, removed = smoothing_split(w, k)
    whole = signature_batch(seifert_matrix(w), [theta], rel_tol)
    parts = [signature_batch(seifert_matrix(b), [theta], rel_tol) for b in blocks]
    sig = int(whole.signature[0])
    bsig = sum(int(p.signature[0]) for p in parts)
    slack = w.strands - 1
    margin = sig - bsig + removed + slack
    degenerate = bool(whole.degenerate[0] or any(p.degenerate[0] for p in parts))
    return SmoothingCheck(margin >= 0, float(margin), sig, bsig, removed, slack, degenerate)


# --------------------------------------------------------------------------
# inserting powers


@dataclass(frozen=True)
class IncrementSample:
    word: str
    position: int
    generator: int
    power: int
    delta_b1: int
    delta_sigma: int


@dataclass
class PowerIncrementReport:
    theta: float
    seed: int
    trials: int
    powers: list[int]
    checked: int = 0
    degenerate: int = 0
    violations: list[IncrementSample] = field(default_factory=list)
    min_ratio: dict[int, float] = field(default_factory=dict)
    empty_word: dict[int, tuple[int, int]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> str:
        d = asdict(self)
        d["passed"] = self.passed
        d["min_ratio"] = {k: (None if math.isinf(v) else v) for k, v in self.min_ratio.items()}
        d["version"] = __version__
        return json.dumps(d, sort_keys=True)


def power_increment_check(
    theta: float,
    trials: int,
    seed: int,
    powers: Sequence[int] = (4, 5, 6),
    max_length: int = 30,
    rel_tol: float = DEFAULT_REL_TOL,
) -> PowerIncrementReport:
    """Insert ``sigma_g^p`` into random 3-braids using both generators and compare ``(sigma, b1)``."""
    rng = np.random.default_rng(seed)
    rep = PowerIncrementReport(theta, seed, trials, list(powers))
    for p in powers:
        s = torus2_signature(p, theta).signature
        rep.empty_word[p] = (s, p - 1)
        rep.min_ratio[p] = math.inf
    for _ in range(trials):
        length = int(rng.integers(2, max_length + 1))
        w = _random_words(rng, 3, length, 1, need_all=True)[0]
        before = signature_batch(seifert_matrix(w), [theta], rel_tol)
        b1 = betti_number(w)
        for p in powers:
            pos = int(rng.integers(0, length + 1))
            g = int(rng.integers(1, 3))
            grown = BraidWord(3, w.letters[:pos] + (g,) * p + w.letters[pos:])
            after = signature_batch(seifert_matrix(grown), [theta], rel_tol)
            if before.degenerate[0] or after.degenerate[0]:
                rep.degenerate += 1
                continue
            rep.checked += 1
            db1 = betti_number(grown) - b1
            ds = int(after.signature[0] - before.signature[0])
            rep.min_ratio[p] = min(rep.min_ratio[p], ds / db1)
            if db1 != p or ds < p - 2:
                rep.violations.append(IncrementSample(format_braid(w), pos, g, p, db1, ds))
    return rep


# --------------------------------------------------------------------------
# ratio envelopes between two angles


@dataclass(frozen=True)
class PairEnvelope:
    a: float | None
    b: float | None
    argmin: str | None
    argmax: str | None
    used: int
    zero_denominator: int
    degenerate: int


def ratio_pair_scan(theta1: float, theta2: float, n: int, L: int, b1_min: int = 1, rel_tol: float = DEFAULT_REL_TOL) -> PairEnvelope:
    lo = hi = None
    argmin = argmax = None
    used = zero = degenerate = 0
    for w in scan_words(n, L):
        if betti_number(w) < b1_min:
            continue
        batch = signature_batch(seifert_matrix(w), [theta1, theta2], rel_tol)
        if batch.degenerate.any():
            degenerate += 1
            continue
        s1, s2 = int(batch.signature[0]), int(batch.signature[1])
        if s2 == 0:
            zero += 1
            continue
        r = s1 / s2
        used += 1
        text = format_braid(w)
        if lo is None or r < lo:
            lo, argmin = r, text
        if hi is None or r > hi:
            hi, argmax = r, text
    return PairEnvelope(lo, hi, argmin, argmax, used, zero, degenerate)


# --------------------------------------------------------------------------
# default pipeline


@dataclass(frozen=True)
class PipelineConfig:
    seed: int
    ratio_thetas: tuple[float, ...] = (0.5, 0.42)
    ratio_length: int = 14
    ratio_b1_min: int = 4
    sweep_length: int = 10
    sweep_grid: int = 19
    family_n_max: int = 60
    family_grid: int = 99
    gg_lengths: tuple[int, ...] = (10, 20, 40)
    gg_samples: int = 200
    increment_thetas: tuple[float, ...] = (0.40, 0.45, 0.5)
    increment_trials: int = 1000
    pair_thetas: tuple[tuple[float, float], ...] = ((0.42, 0.5), (0.05, 0.5))
    workers: int = 1


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def run_pipeline(cfg: PipelineConfig) -> dict[str, str]:
    """Every default experiment, as a mapping from artifact file name to its text."""
    out: dict[str, str] = {}
    for th in cfg.ratio_thetas:
        rep = ratio_scan(3, cfg.ratio_length, th, cfg.ratio_b1_min, workers=cfg.workers)
        out[f"ratio_n3_L{cfg.ratio_length}_theta{th!r}.json"] = _dump(rep.to_dict())
    thetas = np.arange(1, cfg.sweep_grid + 1) / (cfg.sweep_grid + 1)
    out[f"sweep_n3_L{cfg.sweep_length}.csv"] = sweep_csv(sweep_rows(3, cfg.sweep_length, thetas, 1))
    for fam in sorted(FAMILIES):
        n_max = cfg.family_n_max if fam != "twist" else max(1, cfg.family_n_max // 3)
        out[f"family_{fam}.csv"] = sweep_csv(family_scan(fam, n_max, grid=cfg.family_grid))
    gg = gg_check(3, cfg.gg_lengths, cfg.gg_samples, seed=cfg.seed)
    out["gg_k3.json"] = _dump(json.loads(gg.to_json()))
    for i, th in enumerate(cfg.increment_thetas):
        rep = power_increment_check(th, cfg.increment_trials, cfg.seed + i)
        out[f"power_increment_theta{th!r}.json"] = _dump(json.loads(rep.to_json()))
    pairs = {f"{a!r}/{b!r}": asdict(ratio_pair_scan(a, b, 3, cfg.ratio_length)) for a, b in cfg.pair_thetas}
    out["ratio_pairs.json"] = _dump(pairs)
    meta = asdict(cfg)
    meta.pop("workers")
    out["config.json"] = _dump({"config": meta, "version": __version__})
    return out
