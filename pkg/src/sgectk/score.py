"""Feedback scoring: match hypothesis edits against reference edits and
report Precision, Recall and F0.5.

Hypothesis edits live in fluent-hypothesis coordinates and reference edits
in fluent-reference coordinates, so matching first projects each hypothesis
span through the word alignment of the two fluent texts (the "bridge").
A hypothesis edit matches a reference edit when the kinds are equal, the
correction token lists are equal, and the projected span overlaps the
reference span; zero-length spans compare by position. Matching is greedy
left-to-right and one-to-one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .align import DEL, AlignmentOp, align
from .edits import Edit, EditSet
from .errors import StructuralError, ValidationError
from .confidence import FilterPolicy, filter_edits


@dataclass
class MatchResult:
    tp: int
    fp: int
    fn: int
    pairs: list[tuple[Edit, Edit]]

    def __add__(self, other: "MatchResult") -> "MatchResult":
        return MatchResult(self.tp + other.tp, self.fp + other.fp,
                           self.fn + other.fn, self.pairs + other.pairs)


@dataclass(frozen=True)
class ScoreReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f_half: float

    def as_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn,
                "precision": self.precision, "recall": self.recall,
                "f0_5": self.f_half}


def f_half(precision: float, recall: float) -> float:
    """F0.5 = 1.25 P R / (0.25 P + R); 0 when both are 0."""
    denom = 0.25 * precision + recall
    if denom == 0.0:
        return 0.0
    return 1.25 * precision * recall / denom


def prf_counts(tp: int, fp: int, fn: int) -> ScoreReport:
    """Scores from raw counts. Empty denominators score 1.0 so that a
    perfect system on an error-free utterance is not penalized; corpus-level
    aggregation always sums counts first."""
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    return ScoreReport(tp, fp, fn, precision, recall, f_half(precision, recall))


def prf(result: MatchResult) -> ScoreReport:
    return prf_counts(result.tp, result.fp, result.fn)


def _bridge_lens(bridge: Sequence[AlignmentOp]) -> tuple[int, int]:
    if not bridge:
        return 0, 0
    return bridge[-1].src_end, bridge[-1].tgt_end


def _map_boundary(p: int, bridge: Sequence[AlignmentOp], tgt_len: int) -> int:
    for op in bridge:
        if op.src_start <= p < op.src_end:
            if op.kind == DEL:
                return op.tgt_start
            return min(op.tgt_start + (p - op.src_start), op.tgt_end)
    return tgt_len


def project_span(span: tuple[int, int], bridge: Sequence[AlignmentOp]) -> tuple[int, int]:
    """Map a half-open source-side span through the bridge alignment.

    Spans inside source-only (del) regions collapse to the zero-length
    target position at the region boundary.
    """
    src_len, tgt_len = _bridge_lens(bridge)
    start, end = span
    if not (0 <= start <= end <= src_len):
        raise StructuralError(f"span [{start}, {end}) outside bridge source [0, {src_len})")
    return _map_boundary(start, bridge, tgt_len), _map_boundary(end, bridge, tgt_len)


def project_edit(edit: Edit, bridge: Sequence[AlignmentOp]) -> tuple[int, int]:
    return project_span((edit.src_start, edit.src_end), bridge)


def spans_compatible(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """Overlap test used for matching. Zero-length spans compare by
    position: equal positions when both are zero-length, containment
    (boundaries included) when only one is."""
    (a0, a1), (b0, b1) = a, b
    if a0 == a1 and b0 == b1:
        return a0 == b0
    if a0 == a1:
        return b0 <= a0 <= b1
    if b0 == b1:
        return a0 <= b0 <= a1
    return max(a0, b0) < min(a1, b1)


def edits_compatible(hyp_edit: Edit, hyp_span: tuple[int, int], ref_edit: Edit) -> bool:
    return (hyp_edit.kind == ref_edit.kind
            and hyp_edit.corr_text == ref_edit.corr_text
            and spans_compatible(hyp_span, (ref_edit.src_start, ref_edit.src_end)))


def match_edits(hyp: EditSet, ref: EditSet,
                bridge: Sequence[AlignmentOp] | None = None) -> MatchResult:
    """Greedy one-to-one matching of hypothesis edits onto reference edits."""
    if bridge is None:
        bridge = align(hyp.source.tokens, ref.source.tokens)
    used: set[int] = set()
    pairs: list[tuple[Edit, Edit]] = []
    for h in hyp.edits:
        h_span = project_edit(h, bridge)
        for idx, r in enumerate(ref.edits):
            if idx in used:
                continue
            if edits_compatible(h, h_span, r):
                used.add(idx)
                pairs.append((h, r))
                break
    tp = len(pairs)
    return MatchResult(tp, len(hyp.edits) - tp, len(ref.edits) - tp, pairs)


def pair_sets(hyp_sets: Sequence[EditSet], ref_sets: Sequence[EditSet]) -> list[tuple[EditSet, EditSet]]:
    """Pair hypothesis and reference edit sets by utterance id when both
    sides carry ids, positionally otherwise."""
    hyp_ids = [es.utt_id for es in hyp_sets]
    ref_ids = [es.utt_id for es in ref_sets]
    if all(hyp_ids) and all(ref_ids) and sorted(hyp_ids) == sorted(ref_ids) \
            and len(set(hyp_ids)) == len(hyp_ids):
        by_id = {es.utt_id: es for es in ref_sets}
        return [(h, by_id[h.utt_id]) for h in hyp_sets]
    if len(hyp_sets) != len(ref_sets):
        raise ValidationError(
            f"cannot pair {len(hyp_sets)} hypothesis sets with {len(ref_sets)} reference sets")
    return list(zip(hyp_sets, ref_sets))


def score_corpus(hyp_sets: Sequence[EditSet], ref_sets: Sequence[EditSet],
                 bridges: Sequence[Sequence[AlignmentOp]] | None = None) -> ScoreReport:
    """Corpus-level scores from summed counts (never averaged per utterance)."""
    paired = pair_sets(hyp_sets, ref_sets)
    if bridges is None:
        bridges = [align(h.source.tokens, r.source.tokens) for h, r in paired]
    tp = fp = fn = 0
    for (h, r), bridge in zip(paired, bridges):
        result = match_edits(h, r, bridge)
        tp += result.tp
        fp += result.fp
        fn += result.fn
    return prf_counts(tp, fp, fn)


@dataclass(frozen=True)
class SweepRow:
    tau: float
    precision: float
    recall: float
    f_half: float
    kept: int


def sweep(hyp_sets: Sequence[EditSet], ref_sets: Sequence[EditSet],
          thresholds: Sequence[float]) -> list[SweepRow]:
    """Score the corpus at each threshold, filtering hypothesis edits only.

    Every hypothesis edit must already carry a confidence (see
    confidence.score_edit_set). Thresholds must be sorted ascending. The row
    at threshold 0 equals the unfiltered score exactly.
    """
    if list(thresholds) != sorted(thresholds):
        raise ValidationError("thresholds must be sorted ascending")
    for tau in thresholds:
        if not 0.0 <= tau <= 1.0:
            raise ValidationError(f"threshold {tau} outside [0, 1]")

    paired = pair_sets(hyp_sets, ref_sets)
    bridges = [align(h.source.tokens, r.source.tokens) for h, r in paired]
    rows: list[SweepRow] = []
    for tau in thresholds:
        policy = FilterPolicy(threshold=tau)
        tp = fp = fn = kept = 0
        for (h, r), bridge in zip(paired, bridges):
            filtered = filter_edits(h, policy)
            kept += len(filtered.edits)
            result = match_edits(filtered, r, bridge)
            tp += result.tp
            fp += result.fp
            fn += result.fn
        report = prf_counts(tp, fp, fn)
        rows.append(SweepRow(tau, report.precision, report.recall, report.f_half, kept))
    return rows


def format_sweep_tsv(rows: Sequence[SweepRow]) -> str:
    lines = ["tau\tP\tR\tF0.5\tkept"]
    for row in rows:
        lines.append(f"{row.tau:.4f}\t{row.precision:.4f}\t{row.recall:.4f}"
                     f"\t{row.f_half:.4f}\t{row.kept}")
    return "\n".join(lines) + "\n"
