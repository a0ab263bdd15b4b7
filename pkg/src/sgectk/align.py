"""Word-level minimum-edit alignment with a deterministic backtrace.

Opcodes are oriented source -> target: ``ins`` spans exist only in the
target (empty source span) and ``del`` spans only in the source (empty
target span). Adjacent opcodes of the same kind are merged, so consumers
always see maximal runs.

The backtrace prefers equal > sub > del > ins at every cell. That makes
the output a pure function of token content, which downstream code relies
on: reference modification compares two alignments structurally, and equal
inputs must produce equal opcode lists.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

EQUAL = "equal"
SUB = "sub"
INS = "ins"
DEL = "del"
OP_KINDS = (EQUAL, SUB, INS, DEL)


@dataclass(frozen=True)
class AlignmentOp:
    """One typed opcode with half-open spans into source and target."""

    kind: str
    src_start: int
    src_end: int
    tgt_start: int
    tgt_end: int

    @property
    def src_len(self) -> int:
        return self.src_end - self.src_start

    @property
    def tgt_len(self) -> int:
        return self.tgt_end - self.tgt_start


def align(src: Sequence[str], tgt: Sequence[str]) -> list[AlignmentOp]:
    """Minimum-cost word alignment (unit costs for sub/ins/del).

    Returns opcodes whose source spans partition [0, len(src)) and target
    spans partition [0, len(tgt)), in order, with same-kind runs merged.
    Deterministic for fixed inputs.
    """
    n, m = len(src), len(tgt)
    cost = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = i
    for j in range(1, m + 1):
        cost[0][j] = j
    for i in range(1, n + 1):
        row, prev = cost[i], cost[i - 1]
        s = src[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + (s != tgt[j - 1])
            dele = prev[j] + 1
            if dele < best:
                best = dele
            inse = row[j - 1] + 1
            if inse < best:
                best = inse
            row[j] = best

    steps: list[str] = []
    i, j = n, m
    while i > 0 or j > 0:
        c = cost[i][j]
        if i > 0 and j > 0 and src[i - 1] == tgt[j - 1] and cost[i - 1][j - 1] == c:
            steps.append(EQUAL)
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and src[i - 1] != tgt[j - 1] and cost[i - 1][j - 1] + 1 == c:
            steps.append(SUB)
            i -= 1
            j -= 1
        elif i > 0 and cost[i - 1][j] + 1 == c:
            steps.append(DEL)
            i -= 1
        else:
            steps.append(INS)
            j -= 1
    steps.reverse()

    ops: list[AlignmentOp] = []
    si = ti = 0
    for kind, group in itertools.groupby(steps):
        k = sum(1 for _ in group)
        ds = k if kind != INS else 0
        dt = k if kind != DEL else 0
        ops.append(AlignmentOp(kind, si, si + ds, ti, ti + dt))
        si += ds
        ti += dt
    return ops


def alignment_cost(ops: Sequence[AlignmentOp]) -> int:
    """Total edit cost of an opcode list (sub/ins/del tokens at unit cost)."""
    total = 0
    for op in ops:
        if op.kind == SUB:
            total += op.src_len
        elif op.kind == DEL:
            total += op.src_len
        elif op.kind == INS:
            total += op.tgt_len
    return total


def edit_counts(src: Sequence[str], tgt: Sequence[str]) -> tuple[int, int, int, int]:
    """(subs, dels, ins, hits) of the minimal alignment of src to tgt."""
    subs = dels = ins = hits = 0
    for op in align(src, tgt):
        if op.kind == EQUAL:
            hits += op.src_len
        elif op.kind == SUB:
            subs += op.src_len
        elif op.kind == DEL:
            dels += op.src_len
        else:
            ins += op.tgt_len
    return subs, dels, ins, hits


@dataclass(frozen=True)
class WerReport:
    """Word error rate counts. ``rate`` is None when undefined
    (empty reference scored against a non-empty hypothesis)."""

    subs: int
    dels: int
    ins: int
    hits: int
    ref_len: int

    @property
    def errors(self) -> int:
        return self.subs + self.dels + self.ins

    @property
    def rate(self) -> float | None:
        if self.ref_len > 0:
            return self.errors / self.ref_len
        return 0.0 if self.errors == 0 else None

    def __add__(self, other: "WerReport") -> "WerReport":
        return WerReport(
            self.subs + other.subs,
            self.dels + other.dels,
            self.ins + other.ins,
            self.hits + other.hits,
            self.ref_len + other.ref_len,
        )


def wer(ref: Sequence[str], hyp: Sequence[str]) -> WerReport:
    """WER = (subs + dels + ins) / len(ref), ref as source, hyp as target."""
    subs, dels, ins, hits = edit_counts(ref, hyp)
    return WerReport(subs, dels, ins, hits, len(ref))
