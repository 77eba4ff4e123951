"""Pentafoil decomposition of positive 3-braids with a replayable certificate.

Starting from a word, repeatedly normalize it with the :class:`Workspace`
engine, expose a power ``sigma_g^e`` with ``e >= 4`` and cut it out.  When only
squares and cubes remain, one small syllable is cut and the resulting merged
powers are removed in cascade.  The certificate lists every Rotate, Relation
and Remove in order, so replaying it from the original word lands on the base,
and inverting it rebuilds the original exactly.
"""
from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .braid import BraidWord, RewriteMove, _relation_at, format_braid, parse_braid
from .garside3 import Workspace, runs
from .kernels import OP_INSERT, OP_RELATION, OP_REMOVE, OP_ROTATE

CERTIFICATE_SCHEMA = "braidsig.certificate/1"
MAX_BASE_LENGTH = 9


class CaseTag(str, enum.Enum):
    CONDITION_1 = "condition_1"
    CONDITION_2 = "condition_2"
    CONDITION_3 = "condition_3"
    CONDITION_4 = "condition_4"
    CONDITION_5 = "condition_5"
    PARTIAL_POWER = "partial_power"
    MIDDLE_REMOVAL = "middle_removal"
    DELTA_ALL_TWO = "delta_all_two"
    SMALL_REORDERED = "small_reordered"
    SMALL_IN_PLACE = "small_in_place"
    SMALL_FIRST = "small_first"
    EXCEPTIONAL = "exceptional"


_CONDITION_BY_K = {1: CaseTag.CONDITION_4, 2: CaseTag.CONDITION_3, 3: CaseTag.CONDITION_2, 4: CaseTag.CONDITION_1}


@dataclass(frozen=True)
class Remove:
    pos: int
    gen: int
    power: int


@dataclass(frozen=True)
class Insertion:
    position: int
    generator: int
    power: int
    is_final_small: bool = False


@dataclass(frozen=True)
class Decomposition:
    original_length: int
    base: BraidWord
    certificate: np.ndarray = field(repr=False, compare=False)
    tags: tuple[CaseTag, ...] = ()

    @property
    def insertions(self) -> tuple[Insertion, ...]:
        rem = self.certificate[self.certificate[:, 0] == OP_REMOVE]
        out = [Insertion(int(p), int(g), int(e), bool(e < 4)) for _, p, g, e in rem[::-1].tolist()]
        return tuple(out)

    def steps(self) -> list[RewriteMove | Remove]:
        out: list[RewriteMove | Remove] = []
        for op, a, b, c in self.certificate.tolist():
            if op == OP_ROTATE:
                out.append(RewriteMove.rotate(a))
            elif op == OP_RELATION:
                out.append(RewriteMove.relation(a))
            else:
                out.append(Remove(a, b, c))
        return out

    def to_json(self) -> str:
        steps = []
        for s in self.steps():
            if isinstance(s, Remove):
                steps.append({"op": "remove", "pos": s.pos, "gen": s.gen, "power": s.power})
            elif s.kind == "rotate":
                steps.append({"op": "rotate", "k": s.arg})
            else:
                steps.append({"op": "relation", "pos": s.arg})
        return json.dumps(
            {
                "schema": CERTIFICATE_SCHEMA,
                "original_length": self.original_length,
                "base": format_braid(self.base),
                "tags": [t.value for t in self.tags],
                "steps": steps,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Decomposition":
        data = json.loads(text)
        if data.get("schema") != CERTIFICATE_SCHEMA:
            raise ValueError(f"unsupported certificate schema {data.get('schema')!r}")
        rows = []
        for s in data["steps"]:
            op = s["op"]
            if op == "rotate":
                rows.append((OP_ROTATE, int(s["k"]), 0, 0))
            elif op == "relation":
                rows.append((OP_RELATION, int(s["pos"]), 0, 0))
            elif op == "remove":
                rows.append((OP_REMOVE, int(s["pos"]), int(s["gen"]), int(s["power"])))
            else:
                raise ValueError(f"unknown certificate op {op!r}")
        cert = np.array(rows, dtype=np.int64).reshape(-1, 4)
        return cls(
            int(data["original_length"]),
            parse_braid(data["base"], 3),
            cert,
            tuple(CaseTag(t) for t in data.get("tags", [])),
        )


def delta_expansion(n: int, leading: int = 1) -> BraidWord:
    """A spelling of ``Delta^n`` ending in ``sigma^n`` of a single generator.

    ``g (h^2 g^2 ...) x y^n``: ``n-1`` alternating squares after the leading
    letter, one more alternating single letter, then the trailing power.
    """
    if not 1 <= n <= 5:
        raise ValueError("delta_expansion is defined for 1 <= n <= 5")
    if leading not in (1, 2):
        raise ValueError("leading generator must be 1 or 2")
    g = leading
    letters = [g]
    cur = 3 - g
    for _ in range(n - 1):
        letters += [cur, cur]
        cur = 3 - cur
    letters.append(cur)
    letters += [3 - cur] * n
    return BraidWord(3, tuple(letters))


@lru_cache(maxsize=None)
def _relation_path(src: tuple[int, ...], dst: tuple[int, ...]) -> tuple[int, ...]:
    """Shortest list of Relation positions turning ``src`` into ``dst``."""
    if src == dst:
        return ()
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], int] | None] = {src: None}
    queue = deque([src])
    while queue:
        cur = queue.popleft()
        for p in range(len(cur) - 2):
            nxt = _relation_at(cur, p)
            if nxt is None or nxt in parent:
                continue
            parent[nxt] = (cur, p)
            if nxt == dst:
                path = []
                node = nxt
                while parent[node] is not None:
                    node, q = parent[node]
                    path.append(q)
                return tuple(reversed(path))
            queue.append(nxt)
    raise ValueError("spellings are not related by braid relations")


def _expose_power(ws: Workspace, k: int, offset: int, gen: int) -> None:
    """Bring the last ``k`` Deltas next to the tail syllable at ``offset`` and respell them to end in ``gen^k``."""
    n = ws.N
    for b in range(k):
        q = 3 * (n - 1 - b)
        ws._log_relations(kernels.block_right(ws.w, q, offset))
    start = 3 * (n - k) + offset
    leading = gen if k % 2 else 3 - gen
    target = delta_expansion(k, leading).letters
    src = tuple(ws.w[start:start + 3 * k].tolist())
    path = _relation_path(src, target)
    ws.relations([start + p for p in path])
    ws.N = n - k


class _SmallBlocked(Exception):
    """The small removal cannot be made the first removal from the current history."""


class _Decomposer:
    def __init__(self, ws: Workspace, small_done: bool = False, strict: bool = True):
        self.ws = ws
        self.tags: list[CaseTag] = []
        self.first_remove: int | None = None
        self.pre_word: np.ndarray | None = None
        self.small_done = small_done
        self.strict = strict

    def remove(self, pos: int, gen: int, power: int) -> None:
        if self.first_remove is None:
            self.first_remove = self.ws.moves().shape[0]
            self.pre_word = self.ws.w.copy()
        self.ws.remove(pos, gen, power)

    def run(self) -> None:
        ws = self.ws
        while True:
            ws.normalize()
            syl = ws.syllables()
            base = 3 * ws.N
            big = next((s for s in syl if s[2] >= 4), None)
            if big is not None:
                off, g, e = big
                take = e if (e <= 6 and ws.w.size > e) else 4
                if take < e:
                    self.tags.append(CaseTag.PARTIAL_POWER)
                self.tags.append(CaseTag.CONDITION_5)
                self.remove(base + off, g, take)
                continue
            max_a = max((e for _, _, e in syl), default=0)
            k = 4 - max_a
            if ws.N >= k:
                if syl:
                    off, g, _ = next(s for s in syl if s[2] == max_a)
                else:
                    off, g = 0, 2
                _expose_power(ws, k, off, g)
                self.tags.append(_CONDITION_BY_K[k])
                self.remove(3 * ws.N + off + 3 * k - k, g, 4)
                continue
            exps = [e for _, _, e in syl]
            needs_small = len(syl) >= 2 and (
                (ws.N == 0 and min(exps) >= 2) or (ws.N == 1 and set(exps) == {2})
            )
            if needs_small and ws.w.size > MAX_BASE_LENGTH:
                if self.small_done:
                    raise _SmallBlocked
                self.small_done = True
                self.tags.append(CaseTag.MIDDLE_REMOVAL if ws.N == 0 else CaseTag.DELTA_ALL_TWO)
                self.small_removal(syl)
                continue
            if ws.N >= 2:
                self.tags.append(CaseTag.EXCEPTIONAL)
            return

    def small_removal(self, syl) -> None:
        ws = self.ws
        base = 3 * ws.N
        mid = (len(syl) + 1) // 2 - 1
        order = sorted(range(len(syl)), key=lambda i: (abs(i - mid), i))
        if self.first_remove is not None:
            moves = ws.moves()
            head = moves[: self.first_remove]
            rest = moves[self.first_remove:]
            pre = self.pre_word
            size = pre.size
            now, ids, fail = kernels.replay_moves(pre, np.arange(size, dtype=np.int64), rest)
            if fail != -1 or not np.array_equal(now, ws.w):
                raise AssertionError("workspace log is inconsistent")
            for i in order:
                off, g, e = syl[i]
                lo = base + off
                xid = ids[lo:lo + e]
                if np.any(xid < 0) or np.any((xid[1:] - xid[:-1]) % size != 1):
                    continue
                start = int(xid[0])
                if start + e <= size:
                    cut = np.array([[OP_REMOVE, start, g, e]], dtype=np.int64)
                else:
                    cut = np.array([[OP_ROTATE, start, 0, 0], [OP_REMOVE, 0, g, e]], dtype=np.int64)
                is_x = np.zeros(size, dtype=np.bool_)
                is_x[xid] = True
                ws.set_moves(np.concatenate((head, cut, kernels.remap_moves(is_x, rest))))
                ws.w = np.concatenate((ws.w[:lo], ws.w[lo + e:]))
                self.tags.append(CaseTag.SMALL_REORDERED)
                return
            if self.strict:
                raise _SmallBlocked
            self.tags.append(CaseTag.SMALL_IN_PLACE)
        off, g, e = syl[order[0]]
        self.remove(base + off, g, e)


def _small_first_starts(ws0: Workspace):
    """Workspaces with one square or cube already cut from the initial normalized word."""
    base = 3 * ws0.N
    for off, g, e in ws0.syllables():
        for take in (2, 3):
            if take <= e:
                ws = ws0.copy()
                ws.remove(base + off, g, take)
                yield ws
    # Respell the last k blocks and cut a square or cube inside the spelling.
    for k in range(1, min(ws0.N, 5) + 1):
        for g in (1, 2):
            lead = g if k % 2 else 3 - g
            target = delta_expansion(k, lead).letters
            starts, gens, exps = runs(np.asarray(target))
            for s, h, e in zip(starts.tolist(), gens.tolist(), exps.tolist()):
                for take in (2, 3):
                    if take > e:
                        continue
                    ws = ws0.copy()
                    start = 3 * (ws.N - k)
                    src = tuple(ws.w[start:start + 3 * k].tolist())
                    ws.relations([start + p for p in _relation_path(src, target)])
                    ws.N -= k
                    ws.remove(start + s, h, take)
                    yield ws


def _finish(original: BraidWord, d: _Decomposer, extra: tuple[CaseTag, ...] = ()) -> Decomposition:
    base = BraidWord(3, tuple(d.ws.w.tolist()))
    return Decomposition(len(original), base, d.ws.moves(), extra + tuple(d.tags))


def pentafoil_decompose(w: BraidWord) -> Decomposition:
    if w.strands != 3:
        raise ValueError(f"pentafoil decomposition needs 3 strands, got {w.strands}")
    d = _Decomposer(Workspace(w.letters))
    try:
        d.run()
        return _finish(w, d)
    except _SmallBlocked:
        pass
    # The greedy history leaves no untouched small syllable: cut one from the
    # start instead and forbid any further small removal.
    ws0 = Workspace(w.letters)
    ws0.normalize()
    for ws in _small_first_starts(ws0):
        d = _Decomposer(ws, small_done=True)
        try:
            d.run()
        except _SmallBlocked:
            continue
        return _finish(w, d, (CaseTag.SMALL_FIRST,))
    d = _Decomposer(Workspace(w.letters), strict=False)
    d.run()
    return _finish(w, d)


def validate_insertions(d: Decomposition) -> None:
    """Raise ValueError unless every power is >= 4 apart from one small final insertion."""
    ins = d.insertions
    for i, x in enumerate(ins):
        if x.power >= 4:
            continue
        if x.power not in (2, 3) or i != len(ins) - 1:
            raise ValueError(f"insertion {i} has power {x.power}; only the final insertion may be 2 or 3")
    if len(d.base) > MAX_BASE_LENGTH:
        raise ValueError(f"base length {len(d.base)} exceeds {MAX_BASE_LENGTH}")
    if len(d.base) + sum(x.power for x in ins) != d.original_length:
        raise ValueError("length accounting does not add up")


def inverse_certificate(d: Decomposition) -> np.ndarray:
    cert = d.certificate
    lengths = np.empty(cert.shape[0], dtype=np.int64)
    n = d.original_length
    for i, (op, _a, _b, e) in enumerate(cert.tolist()):
        lengths[i] = n
        if op == OP_REMOVE:
            n -= e
    inv = np.zeros_like(cert)
    for j, i in enumerate(range(cert.shape[0] - 1, -1, -1)):
        op, a, b, e = cert[i]
        if op == OP_ROTATE:
            inv[j] = (OP_ROTATE, (lengths[i] - a) % max(lengths[i], 1), 0, 0)
        elif op == OP_RELATION:
            inv[j] = (OP_RELATION, a, 0, 0)
        else:
            inv[j] = (OP_INSERT, a, b, e)
    return inv


def replay(d: Decomposition) -> BraidWord:
    """Invert the certificate: insert the powers back into the base and undo every move."""
    validate_insertions(d)
    base = np.asarray(d.base.letters, dtype=np.int8)
    out, _ids, fail = kernels.replay_moves(base, np.zeros(base.size, dtype=np.int64), inverse_certificate(d))
    if fail != -1:
        raise ValueError(f"certificate step {d.certificate.shape[0] - 1 - fail} cannot be inverted")
    return BraidWord(3, tuple(out.tolist()))


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    failed_step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_certificate(original: BraidWord, d: Decomposition) -> CertificateCheck:
    if original.strands != 3:
        return CertificateCheck(False, None, "original is not a 3-strand word")
    if len(original) != d.original_length:
        return CertificateCheck(False, None, "original length differs from the certificate")
    word = np.asarray(original.letters, dtype=np.int8)
    cert = d.certificate
    if cert.size and np.any(cert[:, 0] == OP_INSERT):
        return CertificateCheck(False, int(np.flatnonzero(cert[:, 0] == OP_INSERT)[0]), "insert in a forward certificate")
    out, _ids, fail = kernels.replay_moves(word, np.zeros(word.size, dtype=np.int64), cert)
    if fail != -1:
        return CertificateCheck(False, int(fail), f"step {int(fail)} ({cert[fail].tolist()}) is not applicable")
    if tuple(out.tolist()) != d.base.letters:
        return CertificateCheck(False, cert.shape[0], "replayed word differs from the base")
    try:
        validate_insertions(d)
    except ValueError as exc:
        return CertificateCheck(False, None, str(exc))
    return CertificateCheck(True)
