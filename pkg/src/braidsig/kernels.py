"""Hot loops: Seifert matrix fill, Delta slides, certificate replay, torus closed form.

Every kernel exists twice.  The ``*_loop`` function is a straight loop over
numpy arrays and is what numba compiles; the ``*_numpy`` function computes the
same result with array operations (or, for replay, a plain interpreter loop).
The public names at the bottom dispatch on :data:`braidsig._accel.USE_NUMBA`.

Letters are stored as small integers (generator indices).  Moves are rows of an
``int64`` array ``[op, a, b, c]``:

* ``[OP_ROTATE, k, 0, 0]``: cyclic rotation, ``w[k:] + w[:k]`` with ``0 <= k <= len``
* ``[OP_RELATION, p, 0, 0]``: ``i j i -> j i j`` (``|i-j| == 1``) or ``i j -> j i`` (``|i-j| >= 2``) at ``p``
* ``[OP_REMOVE, p, g, e]``: delete ``w[p:p+e]``, which must all equal ``g``
* ``[OP_INSERT, p, g, e]``: insert ``g`` repeated ``e`` times before position ``p``
"""
from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

OP_ROTATE = 0
OP_RELATION = 1
OP_REMOVE = 2
OP_INSERT = 3


# --------------------------------------------------------------------------
# Seifert matrix


def _seifert_fill_loop(cols, starts, ends, out):
    m = cols.shape[0]
    for a in range(m):
        out[a, a] = 1
    for a in range(m):
        ca = cols[a]
        pa = starts[a]
        qa = ends[a]
        for b in range(a + 1, m):
            cb = cols[b]
            if cb == ca:
                if starts[b] == qa:
                    out[b, a] = -1
            elif cb == ca + 1:
                pb = starts[b]
                qb = ends[b]
                if pa < pb and pb < qa and qa < qb:
                    out[b, a] = -1
                elif pb < pa and pa < qb and qb < qa:
                    out[b, a] = 1
            else:
                break
    return out


def _seifert_fill_numpy(cols, starts, ends, out):
    m = cols.shape[0]
    idx = np.arange(m)
    out[idx, idx] = 1
    if m < 2:
        return out
    chain = (cols[1:] == cols[:-1]) & (starts[1:] == ends[:-1])
    out[idx[1:][chain], idx[:-1][chain]] = -1
    for c in np.unique(cols):
        lo = np.flatnonzero(cols == c)
        hi = np.flatnonzero(cols == c + 1)
        if hi.size == 0:
            continue
        pa = starts[lo][:, None]
        qa = ends[lo][:, None]
        pb = starts[hi][None, :]
        qb = ends[hi][None, :]
        later = (pa < pb) & (pb < qa) & (qa < qb)
        earlier = (pb < pa) & (pa < qb) & (qb < qa)
        r, s = np.nonzero(later)
        out[hi[s], lo[r]] = -1
        r, s = np.nonzero(earlier)
        out[hi[s], lo[r]] = 1
    return out


# --------------------------------------------------------------------------
# Delta slides (3-strand words).  A block is a Delta spelled ``s t s``.


def _relation_inplace(word, p):
    a = word[p]
    word[p] = word[p + 1]
    word[p + 1] = a
    word[p + 2] = word[p]


_rel = njit(_relation_inplace)


def _block_left_loop(word, q, steps):
    # x Delta -> Delta tau(x), repeated `steps` times
    out = np.empty(2 * steps, np.int64)
    k = 0
    for _ in range(steps):
        if word[q - 1] == word[q]:
            _rel(word, q)
            out[k] = q
            k += 1
        _rel(word, q - 1)
        out[k] = q - 1
        k += 1
        q -= 1
    return out[:k]


def _block_right_loop(word, q, steps):
    # Delta x -> tau(x) Delta, repeated `steps` times
    out = np.empty(2 * steps, np.int64)
    k = 0
    for _ in range(steps):
        if word[q + 3] == word[q]:
            _rel(word, q)
            out[k] = q
            k += 1
        _rel(word, q + 1)
        out[k] = q + 1
        k += 1
        q += 1
    return out[:k]


def _letter_left_loop(word, pos, nblocks):
    # letter at pos crosses the nblocks Deltas standing to its left
    out = np.empty(2 * nblocks, np.int64)
    k = 0
    for _ in range(nblocks):
        q = pos - 3
        if word[q + 3] == word[q]:
            _rel(word, q)
            out[k] = q
            k += 1
        _rel(word, q + 1)
        out[k] = q + 1
        k += 1
        pos = q
    return out[:k]


def _letter_right_loop(word, pos, nblocks):
    out = np.empty(2 * nblocks, np.int64)
    k = 0
    for _ in range(nblocks):
        q = pos + 1
        if word[q - 1] == word[q]:
            _rel(word, q)
            out[k] = q
            k += 1
        _rel(word, q - 1)
        out[k] = q - 1
        k += 1
        pos += 3
    return out[:k]


def _interleave(first, second, use_first):
    pairs = np.stack([first, second], axis=1)
    mask = np.stack([use_first, np.ones_like(use_first)], axis=1)
    return pairs[mask].astype(np.int64)


def _block_left_numpy(word, q, steps):
    if steps == 0:
        return np.empty(0, np.int64)
    seg = word[q - steps:q].copy()
    x = seg[::-1]
    s = np.empty(steps, dtype=word.dtype)
    s[0] = word[q]
    s[1:] = 3 - x[:-1]
    k = np.arange(steps)
    moves = _interleave(q - k, q - k - 1, x == s)
    head = 3 - x[-1]
    word[q - steps:q + 3] = np.concatenate(([head, 3 - head, head], 3 - seg)).astype(word.dtype)
    return moves


def _block_right_numpy(word, q, steps):
    if steps == 0:
        return np.empty(0, np.int64)
    x = word[q + 3:q + 3 + steps].copy()
    s = np.empty(steps, dtype=word.dtype)
    s[0] = word[q]
    s[1:] = 3 - x[:-1]
    k = np.arange(steps)
    moves = _interleave(q + k, q + k + 1, x == s)
    head = 3 - x[-1]
    word[q:q + 3 + steps] = np.concatenate((3 - x, [head, 3 - head, head])).astype(word.dtype)
    return moves


def _letter_left_numpy(word, pos, nblocks):
    if nblocks == 0:
        return np.empty(0, np.int64)
    y0 = int(word[pos])
    j = np.arange(nblocks)
    q = pos - 3 * (j + 1)
    y = np.where(j % 2 == 0, y0, 3 - y0)
    moves = _interleave(q, q + 1, y == word[q])
    heads = (3 - y)[::-1]
    blocks = np.stack([heads, 3 - heads, heads], axis=1).ravel()
    last = y0 if nblocks % 2 == 0 else 3 - y0
    word[pos - 3 * nblocks:pos + 1] = np.concatenate(([last], blocks)).astype(word.dtype)
    return moves


def _letter_right_numpy(word, pos, nblocks):
    if nblocks == 0:
        return np.empty(0, np.int64)
    y0 = int(word[pos])
    j = np.arange(nblocks)
    q = pos + 1 + 3 * j
    y = np.where(j % 2 == 0, y0, 3 - y0)
    moves = _interleave(q, q - 1, y == word[q])
    heads = 3 - y
    blocks = np.stack([heads, 3 - heads, heads], axis=1).ravel()
    last = y0 if nblocks % 2 == 0 else 3 - y0
    word[pos:pos + 3 * nblocks + 1] = np.concatenate((blocks, [last])).astype(word.dtype)
    return moves


# --------------------------------------------------------------------------
# Certificate replay


def _replay_loop(word, ids, ops):
    """Apply ``ops``; return ``(word, ids, failing_index)`` with -1 on success.

    ``ids`` rides along: rotations and removals carry it, relations overwrite
    the touched positions with -1.
    """
    n = word.shape[0]
    cap = n
    for i in range(ops.shape[0]):
        if ops[i, 0] == 3 and ops[i, 3] > 0:
            cap += ops[i, 3]
    w = np.empty(cap, word.dtype)
    d = np.empty(cap, ids.dtype)
    w[:n] = word
    d[:n] = ids
    tmp_w = np.empty_like(w)
    tmp_d = np.empty_like(d)
    for i in range(ops.shape[0]):
        op = ops[i, 0]
        if op == 0:
            k = ops[i, 1]
            if k < 0 or k > n:
                return w[:n], d[:n], i
            if k == 0 or k == n:
                continue
            for j in range(n):
                tmp_w[j] = w[(j + k) % n]
                tmp_d[j] = d[(j + k) % n]
            for j in range(n):
                w[j] = tmp_w[j]
                d[j] = tmp_d[j]
        elif op == 1:
            p = ops[i, 1]
            if p < 0 or p + 1 >= n:
                return w[:n], d[:n], i
            a = w[p]
            b = w[p + 1]
            gap = a - b if a > b else b - a
            if gap >= 2:
                w[p] = b
                w[p + 1] = a
                d[p] = -1
                d[p + 1] = -1
            elif gap == 1 and p + 2 < n and w[p + 2] == a:
                w[p] = b
                w[p + 1] = a
                w[p + 2] = b
                d[p] = -1
                d[p + 1] = -1
                d[p + 2] = -1
            else:
                return w[:n], d[:n], i
        elif op == 2:
            p = ops[i, 1]
            g = ops[i, 2]
            e = ops[i, 3]
            if e < 1 or p < 0 or p + e > n:
                return w[:n], d[:n], i
            for j in range(p, p + e):
                if w[j] != g:
                    return w[:n], d[:n], i
            for j in range(p, n - e):
                w[j] = w[j + e]
                d[j] = d[j + e]
            n -= e
        elif op == 3:
            p = ops[i, 1]
            g = ops[i, 2]
            e = ops[i, 3]
            if e < 1 or p < 0 or p > n:
                return w[:n], d[:n], i
            for j in range(n - 1, p - 1, -1):
                w[j + e] = w[j]
                d[j + e] = d[j]
            for j in range(p, p + e):
                w[j] = g
                d[j] = -1
            n += e
        else:
            return w[:n], d[:n], i
    return w[:n], d[:n], -1


def _remap_loop(is_x, ops):
    """Rewrite ``ops`` for the same word with the flagged letters deleted up front."""
    x = is_x.copy()
    n = x.shape[0]
    out = ops.copy()
    tmp = np.empty_like(x)
    for i in range(ops.shape[0]):
        op = ops[i, 0]
        p = ops[i, 1]
        before = 0
        for j in range(p):
            if x[j]:
                before += 1
        out[i, 1] = p - before
        if op == 0:
            if p == 0 or p == n:
                continue
            for j in range(n):
                tmp[j] = x[(j + p) % n]
            for j in range(n):
                x[j] = tmp[j]
        elif op == 2:
            e = ops[i, 3]
            for j in range(p, n - e):
                x[j] = x[j + e]
            n -= e
    return out


# --------------------------------------------------------------------------
# T(2, n) closed form and rotation classes


def _torus2_loop(n, thetas, tol):
    m = thetas.shape[0]
    sig = np.zeros(m, np.int64)
    nul = np.zeros(m, np.int64)
    for i in range(m):
        s = np.sin(np.pi * thetas[i])
        for k in range(1, n):
            d = s - np.cos(k * np.pi / n)
            if d > tol:
                sig[i] += 1
            elif d < -tol:
                sig[i] -= 1
            else:
                nul[i] += 1
    return sig, nul


def _torus2_numpy(n, thetas, tol):
    k = np.arange(1, n)
    d = np.sin(np.pi * thetas)[:, None] - np.cos(k * np.pi / n)[None, :]
    sig = (d > tol).sum(axis=1) - (d < -tol).sum(axis=1)
    nul = (np.abs(d) <= tol).sum(axis=1)
    return sig.astype(np.int64), nul.astype(np.int64)


def _min_rotation_mask_loop(words):
    m, length = words.shape
    keep = np.ones(m, np.bool_)
    for i in range(m):
        for r in range(1, length):
            for j in range(length):
                a = words[i, (j + r) % length]
                b = words[i, j]
                if a != b:
                    if a < b:
                        keep[i] = False
                    break
            if not keep[i]:
                break
    return keep


def _min_rotation_mask_numpy(words):
    m, length = words.shape
    keep = np.ones(m, dtype=bool)
    rows = np.arange(m)
    for r in range(1, length):
        rot = np.roll(words, -r, axis=1)
        diff = rot != words
        first = diff.argmax(axis=1)
        smaller = diff.any(axis=1) & (rot[rows, first] < words[rows, first])
        keep &= ~smaller
    return keep


def _replay_python(word, ids, ops):
    w = word.tolist()
    d = ids.tolist()
    for i, (op, p, g, e) in enumerate(ops.tolist()):
        n = len(w)
        if op == OP_ROTATE:
            if not 0 <= p <= n:
                return np.array(w, word.dtype), np.array(d, ids.dtype), i
            w = w[p:] + w[:p]
            d = d[p:] + d[:p]
        elif op == OP_RELATION:
            if p < 0 or p + 1 >= n:
                return np.array(w, word.dtype), np.array(d, ids.dtype), i
            a, b = w[p], w[p + 1]
            if abs(a - b) >= 2:
                w[p], w[p + 1] = b, a
                d[p] = d[p + 1] = -1
            elif abs(a - b) == 1 and p + 2 < n and w[p + 2] == a:
                w[p:p + 3] = [b, a, b]
                d[p:p + 3] = [-1, -1, -1]
            else:
                return np.array(w, word.dtype), np.array(d, ids.dtype), i
        elif op == OP_REMOVE:
            if e < 1 or p < 0 or p + e > n or any(c != g for c in w[p:p + e]):
                return np.array(w, word.dtype), np.array(d, ids.dtype), i
            del w[p:p + e]
            del d[p:p + e]
        elif op == OP_INSERT:
            if e < 1 or not 0 <= p <= n:
                return np.array(w, word.dtype), np.array(d, ids.dtype), i
            w[p:p] = [g] * e
            d[p:p] = [-1] * e
        else:
            return np.array(w, word.dtype), np.array(d, ids.dtype), i
    return np.array(w, word.dtype), np.array(d, ids.dtype), -1


def _remap_numpy(is_x, ops):
    x = is_x.copy()
    out = ops.copy()
    for i, (op, p, _g, e) in enumerate(ops.tolist()):
        out[i, 1] = p - np.count_nonzero(x[:p])
        if op == OP_ROTATE:
            x = np.concatenate((x[p:], x[:p]))
        elif op == OP_REMOVE:
            x = np.delete(x, np.s_[p:p + e])
    return out


# --------------------------------------------------------------------------
# dispatch

NUMPY_KERNELS = {
    "seifert_fill": _seifert_fill_numpy,
    "block_left": _block_left_numpy,
    "block_right": _block_right_numpy,
    "letter_left": _letter_left_numpy,
    "letter_right": _letter_right_numpy,
    "replay_moves": _replay_python,
    "remap_moves": _remap_numpy,
    "torus2_counts": _torus2_numpy,
    "min_rotation_mask": _min_rotation_mask_numpy,
}

_LOOPS = {
    "seifert_fill": _seifert_fill_loop,
    "block_left": _block_left_loop,
    "block_right": _block_right_loop,
    "letter_left": _letter_left_loop,
    "letter_right": _letter_right_loop,
    "replay_moves": _replay_loop,
    "remap_moves": _remap_loop,
    "torus2_counts": _torus2_loop,
    "min_rotation_mask": _min_rotation_mask_loop,
}

_compiled: dict = {}


def numba_kernels() -> dict:
    """Compiled versions of every kernel (compiled lazily, once)."""
    if not _compiled:
        _compiled.update({name: njit(fn) for name, fn in _LOOPS.items()})
    return _compiled


_active = numba_kernels() if USE_NUMBA else NUMPY_KERNELS

seifert_fill = _active["seifert_fill"]
block_left = _active["block_left"]
block_right = _active["block_right"]
letter_left = _active["letter_left"]
letter_right = _active["letter_right"]
replay_moves = _active["replay_moves"]
remap_moves = _active["remap_moves"]
torus2_counts = _active["torus2_counts"]
min_rotation_mask = _active["min_rotation_mask"]
