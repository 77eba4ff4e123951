"""Reduced Burau matrices and Alexander polynomials, in exact Laurent arithmetic.

The reduced Burau representation is faithful on three strands, which makes
:func:`equal_words_b3` an exact word-problem solver there.  For more strands we
only use Burau through the Alexander polynomial.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .braid import BraidWord
from .laurent import ONE, T, ZERO, LaurentPoly, det

BurauMatrix = list[list[LaurentPoly]]

_NEG_T = -T


def identity(size: int) -> BurauMatrix:
    return [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]


def reduced_burau(w: BraidWord) -> BurauMatrix:
    """Product of the reduced Burau generator blocks in word order.

    Right-multiplying by the block of sigma_g only touches columns ``g-2..g``,
    so the product is built column-update by column-update.
    """
    size = w.strands - 1
    m = identity(size)
    for g in w.letters:
        i = g - 1
        for row in m:
            x = row[i]
            if not x:
                continue
            if i > 0:
                row[i - 1] = row[i - 1] + x * T
            if i < size - 1:
                row[i + 1] = row[i + 1] + x
            row[i] = x * _NEG_T
    return m


def generator_matrix(g: int, strands: int) -> BurauMatrix:
    return reduced_burau(BraidWord(strands, (g,)))


def matmul(a: BurauMatrix, b: BurauMatrix) -> BurauMatrix:
    n = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(n):
            acc = ZERO
            for k, x in enumerate(row):
                if x and b[k][j]:
                    acc = acc + x * b[k][j]
            new.append(acc)
        out.append(new)
    return out


def equal_words_b3(w1: BraidWord, w2: BraidWord) -> bool:
    """Exact equality of two 3-strand braids (Burau is faithful on B_3)."""
    if w1.strands != 3 or w2.strands != 3:
        raise ValueError("equal_words_b3 only decides equality on 3 strands")
    return len(w1) == len(w2) and reduced_burau(w1) == reduced_burau(w2)


def alexander_from_burau(w: BraidWord) -> LaurentPoly:
    """``det(I - B(w)) (1 - t) / (1 - t^n)``, normalized up to ``+-t^k``."""
    n = w.strands
    if set(w.letters) != set(range(1, n)):
        raise ValueError("the Burau formula needs every generator to appear (connected diagram)")
    b = reduced_burau(w)
    size = n - 1
    a = [[(ONE if i == j else ZERO) - b[i][j] for j in range(size)] for i in range(size)]
    num = det(a) * (ONE - T)
    den = ONE - LaurentPoly.monomial(1, n)
    return num.divmod_exact(den).normalized()


def alexander_from_seifert(v) -> LaurentPoly:
    """``det(V - t V^T)`` for an integer matrix ``V`` (raw, not normalized)."""
    arr = np.asarray(getattr(v, "matrix", v), dtype=np.int64)
    if arr.size == 0:
        return ONE
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("Seifert matrix must be square")
    m = arr.shape[0]
    rows: Sequence[Sequence[LaurentPoly]] = [
        [LaurentPoly((int(arr[i, j]), -int(arr[j, i]))) for j in range(m)] for i in range(m)
    ]
    return det(rows)
