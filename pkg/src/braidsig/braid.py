"""Positive braid words: parsing, combinatorial invariants, enumeration, rewriting.

A :class:`BraidWord` is a strand count plus a tuple of generator indices
``1..n-1``; every letter is a positive crossing.  The text format is a list of
whitespace-separated tokens ``g`` or ``g^e``, so ``"1^2 2 1"`` is
``sigma_1^2 sigma_2 sigma_1``.
"""
from __future__ import annotations

import enum
import itertools
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import kernels

_TOKEN = re.compile(r"^(\d+)(?:\^(\d+))?$")


class BraidParseError(ValueError):
    """Malformed braid text; ``token`` is the 1-based index of the culprit."""

    def __init__(self, message: str, token: int | None = None):
        self.token = token
        if token is not None:
            message = f"token {token}: {message}"
        super().__init__(message)


class InapplicableMove(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(g) for g in self.letters))
        if self.strands < 2:
            raise ValueError(f"need at least 2 strands, got {self.strands}")
        for g in self.letters:
            if not 1 <= g < self.strands:
                raise ValueError(f"generator {g} out of range for {self.strands} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_braid(self)

    def __add__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(max(self.strands, other.strands), self.letters + other.letters)

    def __pow__(self, k: int) -> "BraidWord":
        return BraidWord(self.strands, self.letters * k)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.letters, dtype=np.int8)


@dataclass(frozen=True)
class Syllable:
    generator: int
    exponent: int


@dataclass(frozen=True)
class RewriteMove:
    """``rotate`` by ``arg`` letters, or a braid/commutation ``relation`` at ``arg``."""

    kind: str
    arg: int

    def __post_init__(self):
        if self.kind not in ("rotate", "relation"):
            raise ValueError(f"unknown move kind {self.kind!r}")

    @classmethod
    def rotate(cls, k: int) -> "RewriteMove":
        return cls("rotate", k)

    @classmethod
    def relation(cls, pos: int) -> "RewriteMove":
        return cls("relation", pos)


def word(*letters: int, strands: int | None = None) -> BraidWord:
    """Shorthand: ``word(1, 2, 1)`` is Delta on three strands."""
    if strands is None:
        strands = max(letters, default=1) + 1
    return BraidWord(strands, letters)


def parse_braid(text: str, strands: int | None = None) -> BraidWord:
    letters: list[int] = []
    for idx, tok in enumerate(text.split(), start=1):
        m = _TOKEN.match(tok)
        if not m:
            raise BraidParseError(f"malformed token {tok!r}", idx)
        g = int(m.group(1))
        e = int(m.group(2)) if m.group(2) is not None else 1
        if g < 1 or e < 1:
            raise BraidParseError(f"generator and exponent must be >= 1 in {tok!r}", idx)
        if strands is not None and g >= strands:
            raise BraidParseError(f"generator {g} out of range for {strands} strands", idx)
        letters.extend([g] * e)
    if strands is None:
        strands = max(letters, default=1) + 1
    return BraidWord(strands, tuple(letters))


def syllables(w: BraidWord | Sequence[int]) -> list[Syllable]:
    letters = w.letters if isinstance(w, BraidWord) else tuple(w)
    return [Syllable(g, len(list(run))) for g, run in itertools.groupby(letters)]


def format_braid(w: BraidWord) -> str:
    return " ".join(
        str(s.generator) if s.exponent == 1 else f"{s.generator}^{s.exponent}"
        for s in syllables(w)
    )


def exponent_sum(w: BraidWord) -> int:
    return len(w.letters)


def permutation(w: BraidWord) -> list[int]:
    """Where each strand ends up after passing through ``w`` (0-based)."""
    pos = list(range(w.strands))
    for g in w.letters:
        pos[g - 1], pos[g] = pos[g], pos[g - 1]
    perm = [0] * w.strands
    for place, strand in enumerate(pos):
        perm[strand] = place
    return perm


def closure_components(w: BraidWord) -> int:
    perm = permutation(w)
    seen = [False] * w.strands
    cycles = 0
    for s in range(w.strands):
        if not seen[s]:
            cycles += 1
            while not seen[s]:
                seen[s] = True
                s = perm[s]
    return cycles


def betti_number(w: BraidWord) -> int:
    return len(w.letters) - len(set(w.letters))


def enumerate_positive_words(n: int, length: int, dedupe_rotation: bool = False) -> Iterator[BraidWord]:
    """All positive words of the given length, lexicographically.

    With ``dedupe_rotation`` only the lexicographically least rotation of each
    cyclic class is produced.
    """
    if n < 2 or length < 0:
        raise ValueError("need n >= 2 and length >= 0")
    base = n - 1
    if length == 0:
        yield BraidWord(n, ())
        return
    chunk = 1 << 16
    total = base**length
    powers = base ** np.arange(length - 1, -1, -1, dtype=np.int64)
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        words = ((codes[:, None] // powers[None, :]) % base + 1).astype(np.int8)
        if dedupe_rotation:
            words = words[kernels.min_rotation_mask(words)]
        for row in words.tolist():
            yield BraidWord(n, tuple(row))


def _relation_at(letters: tuple[int, ...], pos: int) -> tuple[int, ...] | None:
    if pos < 0 or pos + 1 >= len(letters):
        return None
    a, b = letters[pos], letters[pos + 1]
    if abs(a - b) >= 2:
        return letters[:pos] + (b, a) + letters[pos + 2:]
    if abs(a - b) == 1 and pos + 2 < len(letters) and letters[pos + 2] == a:
        return letters[:pos] + (b, a, b) + letters[pos + 3:]
    return None


def apply_move(w: BraidWord, m: RewriteMove) -> BraidWord:
    letters = w.letters
    if m.kind == "rotate":
        if not letters:
            return w
        k = m.arg % len(letters)
        return BraidWord(w.strands, letters[k:] + letters[:k])
    out = _relation_at(letters, m.arg)
    if out is None:
        raise InapplicableMove(f"no braid relation applies at position {m.arg} of {format_braid(w)!r}")
    return BraidWord(w.strands, out)


def applicable_moves(w: BraidWord, conjugacy: bool = True) -> list[RewriteMove]:
    moves = [RewriteMove.relation(p) for p in range(len(w)) if _relation_at(w.letters, p) is not None]
    if conjugacy:
        moves += [RewriteMove.rotate(k) for k in range(1, len(w))]
    return moves


class BfsResult(enum.Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    EXHAUSTED = "Exhausted"


def bfs_equal(w1: BraidWord, w2: BraidWord, conjugacy: bool = False, step_budget: int = 10**6) -> BfsResult:
    """Search the Relation (and, for conjugacy, Rotate) graph from ``w1`` for ``w2``.

    Positive words represent the same positive braid exactly when Relation
    moves connect them, so an exhausted class is a proof of inequality.
    """
    if len(w1) != len(w2) or w1.strands != w2.strands:
        raise ValueError("bfs_equal needs words of equal length and strand count")
    target = w2.letters
    start = w1.letters
    if start == target:
        return BfsResult.EQUAL
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        nbrs = [_relation_at(cur, p) for p in range(len(cur))]
        if conjugacy and len(cur) > 1:
            nbrs.append(cur[1:] + cur[:1])
        for nxt in nbrs:
            if nxt is None or nxt in seen:
                continue
            if nxt == target:
                return BfsResult.EQUAL
            if len(seen) >= step_budget:
                return BfsResult.EXHAUSTED
            seen.add(nxt)
            queue.append(nxt)
    return BfsResult.NOT_EQUAL


def tau(letters: Sequence[int], strands: int = 3) -> tuple[int, ...]:
    """Conjugation by the half twist: sigma_i -> sigma_{n-i}."""
    return tuple(strands - g for g in letters)
