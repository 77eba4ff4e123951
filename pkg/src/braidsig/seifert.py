"""Brick basis and integer Seifert matrix of the canonical surface of a positive braid closure.

Column ``i`` contributes one brick for every pair of consecutive ``sigma_i``
letters.  Entry rules (bricks sorted by column, then start):

* diagonal ``+1``;
* same column, ``b'`` starting where ``b`` ends: ``V[b', b] = -1``;
* adjacent columns ``i`` and ``i+1`` with interleaved spans: the column ``i+1``
  brick ``x`` and column ``i`` brick ``y`` get ``V[x, y] = -1`` when ``x``
  starts later and ``+1`` when it starts earlier, ``V[y, x] = 0``;
* everything else ``0``.

With these signs ``det(V - t V^T)`` agrees with the Burau Alexander polynomial
and positive braids carry positive signature.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .braid import BraidWord


@dataclass(frozen=True)
class Brick:
    column: int
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class SeifertMatrix:
    bricks: tuple[Brick, ...]
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return len(self.bricks)

    def to_json(self) -> str:
        return json.dumps(
            {
                "size": self.size,
                "bricks": [[b.column, b.start, b.end] for b in self.bricks],
                "matrix": self.matrix.tolist(),
            }
        )

    def grid(self) -> str:
        if self.size == 0:
            return "(empty)"
        width = max(len(str(int(x))) for x in self.matrix.ravel())
        return "\n".join(" ".join(f"{int(x):>{width}}" for x in row) for row in self.matrix)


def _brick_arrays(w: BraidWord) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    letters = np.asarray(w.letters, dtype=np.int64)
    pos = np.arange(letters.size, dtype=np.int64)
    order = np.lexsort((pos, letters))
    col = letters[order]
    p = pos[order]
    keep = col[1:] == col[:-1]
    return col[1:][keep], p[:-1][keep], p[1:][keep]


def brick_basis(w: BraidWord) -> tuple[Brick, ...]:
    cols, starts, ends = _brick_arrays(w)
    return tuple(Brick(int(c), int(s), int(e)) for c, s, e in zip(cols, starts, ends))


def seifert_matrix(w: BraidWord) -> SeifertMatrix:
    cols, starts, ends = _brick_arrays(w)
    m = cols.size
    out = np.zeros((m, m), dtype=np.int64)
    kernels.seifert_fill(cols, starts, ends, out)
    bricks = tuple(Brick(int(c), int(s), int(e)) for c, s, e in zip(cols, starts, ends))
    return SeifertMatrix(bricks, out)
