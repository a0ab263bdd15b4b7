"""Token-level confidences and their mapping onto edit-level scores.

Token confidence files are JSON lines, one object per utterance:

  {"utt_id": "...", "tokens": [{"t": "<raw token>", "c": 0.93}, ...]}

Raw tokens are normalized with the same config as the transcript and then
reconciled against it one-to-one; consecutive raw tokens whose normalized
concatenation equals one transcript token merge (taking the minimum
confidence) and tokens that normalize away are dropped.

An edit covering fluent-side confidences a_i..a_j and corrected-side
confidences b_i..b_j can be scored six ways:

  flt_avg  mean(a)        flt_min  min(a)
  gec_avg  mean(b)        gec_min  min(b)
  avg      (flt_avg + gec_avg) / 2
  min      min(flt_min, gec_min)

M edits have no fluent span and U edits no corrected span; the absent side
contributes ``default_fill`` (1.0 unless configured) as both its mean and
its minimum.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from statistics import fmean

from .edits import Edit, EditSet, apply_edits, corrected_spans, with_confidences
from .errors import FormatError, StructuralError, ValidationError
from .textnorm import NormConfig, TokenSequence, normalize_token

FLT_AVG = "flt_avg"
FLT_MIN = "flt_min"
GEC_AVG = "gec_avg"
GEC_MIN = "gec_min"
AVG = "avg"
MIN = "min"
MODES = (FLT_AVG, FLT_MIN, GEC_AVG, GEC_MIN, AVG, MIN)


@dataclass(frozen=True)
class FilterPolicy:
    """How to score an edit and when to keep it."""

    mode: str = AVG
    threshold: float = 0.0
    default_fill: float = 1.0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown confidence mode {self.mode!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        if not 0.0 <= self.default_fill <= 1.0:
            raise ValueError("default_fill must lie in [0, 1]")


@dataclass
class ConfidenceEntry:
    """Raw (un-normalized) tokens of one utterance with their confidences."""

    utt_id: str
    tokens: list[tuple[str, float]]


@dataclass
class ConfidencedSequence:
    """Normalized tokens of one utterance paired with confidences."""

    utt_id: str
    tokens: list[tuple[str, float]]

    def words(self) -> list[str]:
        return [t for t, _ in self.tokens]

    def confs(self) -> list[float]:
        return [c for _, c in self.tokens]

    def __len__(self) -> int:
        return len(self.tokens)


def read_confidence_jsonl(text: str, name: str = "<confidence>") -> list[ConfidenceEntry]:
    """Parse a confidence file; rejects duplicate ids and out-of-range values."""
    entries: list[ConfidenceEntry] = []
    seen: dict[str, int] = {}
    for ln, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{name}:{ln}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict) or set(obj) != {"utt_id", "tokens"}:
            raise FormatError(f"{name}:{ln}: object must have exactly utt_id and tokens")
        utt_id = obj["utt_id"]
        if not isinstance(utt_id, str) or not utt_id:
            raise FormatError(f"{name}:{ln}: utt_id must be a non-empty string")
        if utt_id in seen:
            raise FormatError(
                f"{name}:{ln}: duplicate utt_id {utt_id!r} (first seen line {seen[utt_id]})")
        seen[utt_id] = ln
        tokens: list[tuple[str, float]] = []
        if not isinstance(obj["tokens"], list):
            raise FormatError(f"{name}:{ln}: tokens must be a list")
        for item in obj["tokens"]:
            if not isinstance(item, dict) or set(item) != {"t", "c"}:
                raise FormatError(f"{name}:{ln}: token objects must have exactly t and c")
            tok, conf = item["t"], item["c"]
            if not isinstance(tok, str) or not tok or any(ch.isspace() for ch in tok):
                raise FormatError(f"{name}:{ln}: t must be a non-empty whitespace-free string")
            if isinstance(conf, bool) or not isinstance(conf, (int, float)):
                raise FormatError(f"{name}:{ln}: c must be a number")
            if not 0.0 <= conf <= 1.0:
                raise FormatError(f"{name}:{ln}: c={conf} outside [0, 1]")
            tokens.append((tok, float(conf)))
        entries.append(ConfidenceEntry(utt_id, tokens))
    return entries


def write_confidence_jsonl(entries: list[ConfidenceEntry]) -> str:
    lines = []
    for e in entries:
        obj = {"utt_id": e.utt_id, "tokens": [{"t": t, "c": c} for t, c in e.tokens]}
        lines.append(json.dumps(obj, ensure_ascii=False))
    return "\n".join(lines) + "\n" if lines else ""


def to_entry(cs: ConfidencedSequence) -> ConfidenceEntry:
    """Inverse of attach_confidence for already-normalized token streams."""
    return ConfidenceEntry(cs.utt_id, list(cs.tokens))


def attach_confidence(seq: TokenSequence, entry: ConfidenceEntry,
                      cfg: NormConfig = NormConfig()) -> ConfidencedSequence:
    """Reconcile a raw confidence entry with a normalized transcript.

    Raises ValidationError naming the utterance when the token streams
    cannot be reconciled.
    """
    if entry.utt_id and seq.utt_id and entry.utt_id != seq.utt_id:
        raise ValidationError(
            f"confidence entry {entry.utt_id!r} attached to utterance {seq.utt_id!r}")

    norm: list[tuple[str, float]] = []
    for raw, conf in entry.tokens:
        tok = normalize_token(raw, cfg)
        if tok:
            norm.append((tok, conf))

    if [t for t, _ in norm] == seq.tokens:
        return ConfidencedSequence(seq.utt_id, norm)

    # Normalization can leave the confidence stream finer-grained than the
    # transcript (e.g. a contraction decoded as two pieces); merge greedily.
    out: list[tuple[str, float]] = []
    j = 0
    for target in seq.tokens:
        if j >= len(norm):
            raise ValidationError(
                f"confidence tokens exhausted before transcript for utterance {seq.utt_id!r}")
        piece, conf = norm[j]
        j += 1
        confs = [conf]
        while piece != target:
            if not target.startswith(piece) or j >= len(norm):
                raise ValidationError(
                    f"confidence tokens do not reconcile with transcript "
                    f"for utterance {seq.utt_id!r} (at {target!r})")
            piece += norm[j][0]
            confs.append(norm[j][1])
            j += 1
        out.append((target, min(confs)))
    if j != len(norm):
        raise ValidationError(
            f"{len(norm) - j} unmatched confidence tokens for utterance {seq.utt_id!r}")
    return ConfidencedSequence(seq.utt_id, out)


def edit_confidence(edit: Edit, flt: ConfidencedSequence, gec: ConfidencedSequence,
                    gec_span: tuple[int, int], policy: FilterPolicy) -> float:
    """Score one edit under the policy's mode. ``gec_span`` locates the
    correction inside the corrected sequence (see edits.corrected_spans)."""
    gs, ge = gec_span
    if not (0 <= edit.src_start <= edit.src_end <= len(flt.tokens)):
        raise StructuralError(
            f"edit span [{edit.src_start}, {edit.src_end}) outside fluent sequence")
    if not (0 <= gs <= ge <= len(gec.tokens)):
        raise StructuralError(f"span [{gs}, {ge}) outside corrected sequence")

    a = [c for _, c in flt.tokens[edit.src_start:edit.src_end]]
    b = [c for _, c in gec.tokens[gs:ge]]
    fill = policy.default_fill
    flt_avg = fmean(a) if a else fill
    flt_min = min(a) if a else fill
    gec_avg = fmean(b) if b else fill
    gec_min = min(b) if b else fill

    if policy.mode == FLT_AVG:
        return flt_avg
    if policy.mode == FLT_MIN:
        return flt_min
    if policy.mode == GEC_AVG:
        return gec_avg
    if policy.mode == GEC_MIN:
        return gec_min
    if policy.mode == AVG:
        return (flt_avg + gec_avg) / 2.0
    return min(flt_min, gec_min)


def score_edit_set(es: EditSet, flt: ConfidencedSequence, gec: ConfidencedSequence,
                   policy: FilterPolicy) -> EditSet:
    """Copy of ``es`` with a confidence on every edit.

    ``flt`` must match the edit set's source tokens and ``gec`` the corrected
    tokens (apply_edits of the set); both are checked.
    """
    if flt.words() != es.source.tokens:
        raise ValidationError(
            f"fluent confidence tokens disagree with edit source for utterance {es.utt_id!r}")
    corrected = apply_edits(es)
    if gec.words() != corrected.tokens:
        raise ValidationError(
            f"corrected confidence tokens disagree with applied edits "
            f"for utterance {es.utt_id!r}")
    spans = corrected_spans(es)
    values = [edit_confidence(e, flt, gec, span, policy)
              for e, span in zip(es.edits, spans)]
    return with_confidences(es, values)


def filter_edits(es: EditSet, policy: FilterPolicy) -> EditSet:
    """Keep exactly the edits whose confidence is >= the policy threshold."""
    for e in es.edits:
        if e.confidence is None:
            raise ValidationError(
                f"edit without confidence in utterance {es.utt_id!r}; "
                f"score the set before filtering")
    kept = [e for e in es.edits if e.confidence >= policy.threshold]
    return EditSet(es.source, kept)
