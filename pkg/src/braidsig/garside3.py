"""Conjugacy normal form ``Delta^N sigma_1^a1 sigma_2^a2 ...`` for positive 3-braids.

Everything happens inside :class:`Workspace`, which holds a letter array laid
out as ``N`` Delta blocks followed by a tail, and logs every rewrite as a
Rotate or Relation move.  Because the whole computation is a sequence of
logged moves, the same engine drives certificate production for the plumbing
decomposition.

The closure only sees the tail cyclically, with a twist: moving the last tail
letter ``x`` in front of ``Delta^N`` turns it into ``tau^N(x)``, where ``tau``
swaps the two generators.  An exponent-one syllable in that twisted cyclic
sequence is a spelled-out Delta ``a b a``, which gets slid to the block prefix.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .braid import BraidWord, Syllable
from .kernels import OP_RELATION, OP_REMOVE, OP_ROTATE


def _relation_rows(pos: np.ndarray) -> np.ndarray:
    rows = np.zeros((pos.size, 4), dtype=np.int64)
    rows[:, 0] = OP_RELATION
    rows[:, 1] = pos
    return rows


def runs(tail: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Run-length encoding: (offsets, generators, exponents)."""
    if tail.size == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, empty
    cut = np.flatnonzero(tail[1:] != tail[:-1]) + 1
    starts = np.concatenate(([0], cut))
    ends = np.concatenate((cut, [tail.size]))
    return starts, tail[starts].astype(np.int64), ends - starts


class Workspace:
    """Mutable 3-strand word ``Delta^N * tail`` plus the log of moves applied to it."""

    def __init__(self, letters, track_conjugator: bool = False):
        self.w = np.asarray(letters, dtype=np.int8).copy()
        if self.w.size and (self.w.min() < 1 or self.w.max() > 2):
            raise ValueError("Workspace holds 3-strand words only")
        self.N = 0
        self._chunks: list[np.ndarray] = []
        self.conjugator: list[int] | None = [] if track_conjugator else None

    def copy(self) -> "Workspace":
        other = Workspace.__new__(Workspace)
        other.w = self.w.copy()
        other.N = self.N
        other._chunks = [self.moves().copy()]
        other.conjugator = None if self.conjugator is None else list(self.conjugator)
        return other

    # -- logging --------------------------------------------------------

    @property
    def tail(self) -> np.ndarray:
        return self.w[3 * self.N:]

    def moves(self) -> np.ndarray:
        if not self._chunks:
            return np.empty((0, 4), dtype=np.int64)
        if len(self._chunks) > 1:
            self._chunks = [np.concatenate(self._chunks)]
        return self._chunks[0]

    def set_moves(self, moves: np.ndarray) -> None:
        self._chunks = [moves]

    def _log_relations(self, pos: np.ndarray) -> None:
        if pos.size:
            self._chunks.append(_relation_rows(pos))

    # -- primitive moves --------------------------------------------------

    def rotate(self, k: int) -> None:
        n = self.w.size
        k %= max(n, 1)
        if k == 0:
            return
        if self.conjugator is not None:
            self.conjugator.extend(self.w[:k].tolist())
        self.w = np.concatenate((self.w[k:], self.w[:k]))
        self._chunks.append(np.array([[OP_ROTATE, k, 0, 0]], dtype=np.int64))

    def relations(self, positions) -> None:
        for p in positions:
            kernels._relation_inplace(self.w, int(p))
        self._log_relations(np.asarray(positions, dtype=np.int64))

    def remove(self, pos: int, gen: int, power: int) -> None:
        seg = self.w[pos:pos + power]
        if seg.size != power or np.any(seg != gen):
            raise AssertionError(f"remove({pos}, {gen}, {power}) does not match the word")
        self.w = np.concatenate((self.w[:pos], self.w[pos + power:]))
        self._chunks.append(np.array([[OP_REMOVE, pos, gen, power]], dtype=np.int64))

    # -- Delta bookkeeping -------------------------------------------------

    def twist_right(self) -> None:
        """Last tail letter to the front of the tail (it crosses every block)."""
        self.rotate(self.w.size - 1)
        self._log_relations(kernels.letter_right(self.w, 0, self.N))

    def twist_left(self) -> None:
        """First tail letter to the end of the tail."""
        self._log_relations(kernels.letter_left(self.w, 3 * self.N, self.N))
        self.rotate(1)

    def extract(self, offset: int) -> None:
        """Tail letters ``offset..offset+2`` spell a Delta; slide it into the block prefix."""
        q = 3 * self.N + offset
        self._log_relations(kernels.block_left(self.w, q, offset))
        self.N += 1

    def _tw(self, x: int) -> int:
        return 3 - x if self.N % 2 else x

    def _find_pattern(self) -> int | None:
        t = self.tail
        m = t.size
        if m < 3:
            return None
        hit = np.flatnonzero((t[:-2] != t[1:-1]) & (t[1:-1] != t[2:]))
        if hit.size:
            return int(hit[0])
        if self._tw(int(t[-1])) != t[0] and t[0] != t[1]:
            self.twist_right()
            return 0
        if t[-2] != t[-1] and t[-1] != self._tw(int(t[0])):
            self.twist_left()
            return m - 3
        return None

    def normalize(self) -> None:
        """Extract every cyclic exponent-one syllable, then make the tail start a cyclic syllable."""
        while True:
            off = self._find_pattern()
            if off is None:
                break
            self.extract(off)
        t = self.tail
        if t.size == 0:
            return
        single = bool(np.all(t == t[0]))
        if single or self._tw(int(t[0])) != t[-1]:
            return
        last = int(t[-1])
        e = t.size - int(np.flatnonzero(t != last)[-1]) - 1
        for _ in range(e):
            self.twist_right()

    def syllables(self) -> list[tuple[int, int, int]]:
        """``(tail offset, generator, exponent)`` of each tail syllable."""
        starts, gens, exps = runs(self.tail)
        return list(zip(starts.tolist(), gens.tolist(), exps.tolist()))

    def flip(self) -> None:
        """Conjugate by Delta: every generator swaps (only the conjugator records it)."""
        if self.conjugator is not None:
            self.conjugator.extend((1, 2, 1))
        self.w = (3 - self.w).astype(np.int8)


@dataclass(frozen=True)
class GarsideNF3:
    delta_power: int
    tail: tuple[Syllable, ...] = ()

    def __post_init__(self):
        if self.delta_power < 0:
            raise ValueError("delta_power must be non-negative")
        for a, b in zip(self.tail, self.tail[1:]):
            if a.generator == b.generator:
                raise ValueError("tail syllables must alternate generators")
        if self.tail and self.tail[0].generator != 1:
            raise ValueError("tail must start with generator 1")

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(s.exponent for s in self.tail)

    @property
    def length(self) -> int:
        return 3 * self.delta_power + sum(self.exponents)

    @classmethod
    def from_exponents(cls, delta_power: int, exponents) -> "GarsideNF3":
        return cls(delta_power, tuple(Syllable(1 + i % 2, int(e)) for i, e in enumerate(exponents)))

    def to_text(self) -> str:
        return f"D^{self.delta_power} | " + " ".join(map(str, self.exponents))

    @classmethod
    def from_text(cls, text: str) -> "GarsideNF3":
        head, _, rest = text.partition("|")
        head = head.strip()
        if not head.startswith("D^"):
            raise ValueError(f"normal form text must start with 'D^N |': {text!r}")
        return cls.from_exponents(int(head[2:]), [int(x) for x in rest.split()])

    def to_json(self) -> str:
        return json.dumps(
            {
                "delta_power": self.delta_power,
                "tail": [[s.generator, s.exponent] for s in self.tail],
                "length": self.length,
            }
        )

    def __str__(self) -> str:
        return self.to_text()


def _canonicalize(ws: Workspace) -> GarsideNF3:
    syl = ws.syllables()
    if syl:
        exps = [e for _, _, e in syl]
        m = len(exps)
        j = min(range(m), key=lambda r: (exps[r:] + exps[:r], r))
        for _ in range(sum(exps[j:])):
            ws.twist_right()
        if ws.tail[0] == 2:
            ws.flip()
        syl = ws.syllables()
    return GarsideNF3(ws.N, tuple(Syllable(g, e) for _, g, e in syl))


def _check3(w: BraidWord) -> None:
    if w.strands != 3:
        raise ValueError(f"expected a 3-strand braid, got {w.strands} strands")


def normal_form_3(w: BraidWord) -> GarsideNF3:
    _check3(w)
    ws = Workspace(w.letters)
    ws.normalize()
    return _canonicalize(ws)


def normal_form_3_with_conjugator(w: BraidWord) -> tuple[GarsideNF3, BraidWord]:
    """Also return a positive ``C`` with ``w C = C nf_to_word(nf)`` as braids."""
    _check3(w)
    ws = Workspace(w.letters, track_conjugator=True)
    ws.normalize()
    nf = _canonicalize(ws)
    return nf, BraidWord(3, tuple(ws.conjugator))


def nf_to_word(nf: GarsideNF3) -> BraidWord:
    letters = [1, 2, 1] * nf.delta_power
    for s in nf.tail:
        letters.extend([s.generator] * s.exponent)
    return BraidWord(3, tuple(letters))
