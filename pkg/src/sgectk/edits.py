"""Grammatical edits (R/M/U) extracted from alignments, plus the M2 file format.

An edit rewrites a span of the fluent (source) sequence into a correction:

  R  replacement   both sides non-empty
  M  missing       zero-length source span at an insertion point
  U  unnecessary   empty correction (the source tokens are deleted)

M2 format, one utterance per block, blocks separated by one blank line:

  S <space-joined source tokens>
  A <start> <end>|||<R|M|U>|||<correction tokens or -NONE->|||REQUIRED|||-NONE-|||0

M edits carry start == end (insertion index); U edits carry correction
``-NONE-``. The format has no utterance-id field, so ``parse_m2`` assigns
positional ids "0", "1", ... and round-trips are bit-exact at the file level.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .align import EQUAL, align
from .errors import FormatError, StructuralError
from .textnorm import TokenSequence

R = "R"
M = "M"
U = "U"
EDIT_KINDS = (R, M, U)

NONE_TOKEN = "-NONE-"


@dataclass
class Edit:
    """One edit over the fluent sequence; spans are half-open token indices."""

    kind: str
    src_start: int
    src_end: int
    src_text: list[str]
    corr_text: list[str]
    confidence: float | None = None

    def signature(self) -> tuple[str, tuple[str, ...]]:
        """(kind, correction) pair used when comparing edits across texts."""
        return self.kind, tuple(self.corr_text)


def classify(src_text: Sequence[str], corr_text: Sequence[str]) -> str:
    if src_text and corr_text:
        return R
    if corr_text:
        return M
    if src_text:
        return U
    raise StructuralError("edit with both sides empty")


def make_edit(src_start: int, src_end: int, src_text: Sequence[str],
              corr_text: Sequence[str], confidence: float | None = None) -> Edit:
    return Edit(classify(src_text, corr_text), src_start, src_end,
                list(src_text), list(corr_text), confidence)


@dataclass
class EditSet:
    """All edits of one utterance, sorted by source position, non-overlapping."""

    source: TokenSequence
    edits: list[Edit] = field(default_factory=list)

    @property
    def utt_id(self) -> str:
        return self.source.utt_id

    def __len__(self) -> int:
        return len(self.edits)


def extract_edits(fluent, corrected) -> EditSet:
    """Phrase-level edits turning ``fluent`` into ``corrected``.

    Each maximal non-equal run of the word alignment becomes one edit, so a
    sub directly followed by a del (no equal between) merges into a single R
    edit with concatenated sides.
    """
    src_seq = fluent if isinstance(fluent, TokenSequence) else TokenSequence("", list(fluent))
    src = src_seq.tokens
    tgt = corrected.tokens if isinstance(corrected, TokenSequence) else list(corrected)
    ops = align(src, tgt)

    edits: list[Edit] = []
    i = 0
    while i < len(ops):
        if ops[i].kind == EQUAL:
            i += 1
            continue
        j = i
        while j < len(ops) and ops[j].kind != EQUAL:
            j += 1
        s0, s1 = ops[i].src_start, ops[j - 1].src_end
        t0, t1 = ops[i].tgt_start, ops[j - 1].tgt_end
        edits.append(make_edit(s0, s1, src[s0:s1], tgt[t0:t1]))
        i = j
    return EditSet(src_seq, edits)


def check_edit_set(es: EditSet) -> None:
    """Raise StructuralError unless spans are in-bounds, ordered, non-overlapping
    and consistent with the stored texts and kinds."""
    src = es.source.tokens
    pos = 0
    for e in es.edits:
        if e.kind not in EDIT_KINDS:
            raise StructuralError(f"unknown edit kind {e.kind!r}")
        if not (0 <= e.src_start <= e.src_end <= len(src)):
            raise StructuralError(
                f"edit span [{e.src_start}, {e.src_end}) out of range for "
                f"{len(src)}-token source")
        if e.src_start < pos:
            raise StructuralError(
                f"edit span [{e.src_start}, {e.src_end}) overlaps a previous edit")
        if e.src_end - e.src_start != len(e.src_text):
            raise StructuralError("edit span length disagrees with src_text")
        if src[e.src_start:e.src_end] != e.src_text:
            raise StructuralError("edit src_text disagrees with source tokens")
        if e.kind != classify(e.src_text, e.corr_text):
            raise StructuralError(
                f"edit kind {e.kind} inconsistent with its sides")
        pos = e.src_end


def apply_edits(es: EditSet) -> TokenSequence:
    """Apply all edits left-to-right; inverse of extract_edits on the corrected side."""
    check_edit_set(es)
    src = es.source.tokens
    out: list[str] = []
    pos = 0
    for e in es.edits:
        out.extend(src[pos:e.src_start])
        out.extend(e.corr_text)
        pos = e.src_end
    out.extend(src[pos:])
    return TokenSequence(es.utt_id, out)


def corrected_spans(es: EditSet) -> list[tuple[int, int]]:
    """Span of each edit's correction inside apply_edits(es), in edit order.

    U edits give a zero-length span at the point where their source tokens
    were removed.
    """
    spans: list[tuple[int, int]] = []
    delta = 0
    for e in es.edits:
        start = e.src_start + delta
        end = start + len(e.corr_text)
        spans.append((start, end))
        delta += len(e.corr_text) - (e.src_end - e.src_start)
    return spans


def with_confidences(es: EditSet, values: Sequence[float]) -> EditSet:
    """Copy of es with one confidence per edit."""
    if len(values) != len(es.edits):
        raise StructuralError("one confidence value required per edit")
    new = [replace(e, confidence=v) for e, v in zip(es.edits, values)]
    return EditSet(es.source, new)


def write_m2(sets: Sequence[EditSet]) -> str:
    """Serialize edit sets. Empty input yields an empty file."""
    blocks = []
    for es in sets:
        check_edit_set(es)
        lines = ["S " + " ".join(es.source.tokens) if es.source.tokens else "S"]
        for e in es.edits:
            corr = " ".join(e.corr_text) if e.corr_text else NONE_TOKEN
            lines.append(
                f"A {e.src_start} {e.src_end}|||{e.kind}|||{corr}|||REQUIRED|||-NONE-|||0")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""


def _parse_a_line(line: str, ln: int, tokens: list[str], prev_end: int) -> Edit:
    fields = line[2:].split("|||")
    if len(fields) != 6:
        raise FormatError(f"line {ln}: expected 6 |||-separated fields, got {len(fields)}")
    span_part, kind, corr_part, required, none_field, annot = fields
    span_toks = span_part.split()
    if len(span_toks) != 2:
        raise FormatError(f"line {ln}: span must be two integers")
    try:
        start, end = int(span_toks[0]), int(span_toks[1])
    except ValueError:
        raise FormatError(f"line {ln}: span must be two integers") from None
    if kind not in EDIT_KINDS:
        raise FormatError(f"line {ln}: unknown edit kind {kind!r}")
    if (required, none_field, annot) != ("REQUIRED", "-NONE-", "0"):
        raise FormatError(f"line {ln}: trailing fields must be REQUIRED|||-NONE-|||0")
    if not corr_part:
        raise FormatError(f"line {ln}: empty correction field (use {NONE_TOKEN})")
    corr_text = [] if corr_part == NONE_TOKEN else corr_part.split()

    if not (0 <= start <= end <= len(tokens)):
        raise StructuralError(
            f"line {ln}: span [{start}, {end}) out of range for {len(tokens)}-token source")
    if start < prev_end:
        raise StructuralError(f"line {ln}: edit span overlaps a previous edit")
    if kind == M and start != end:
        raise StructuralError(f"line {ln}: M edit must have start == end")
    if kind in (R, U) and start == end:
        raise StructuralError(f"line {ln}: {kind} edit must cover source tokens")
    if kind == U and corr_text:
        raise StructuralError(f"line {ln}: U edit must carry {NONE_TOKEN}")
    if kind in (R, M) and not corr_text:
        raise StructuralError(f"line {ln}: {kind} edit requires correction tokens")
    return Edit(kind, start, end, tokens[start:end], corr_text)


def parse_m2(text: str) -> list[EditSet]:
    """Parse M2 file content; utterance ids are positional ("0", "1", ...).

    Malformed lines raise FormatError with the line number; structurally
    invalid spans raise StructuralError.
    """
    sets: list[EditSet] = []
    tokens: list[str] | None = None
    edits: list[Edit] = []
    prev_end = 0

    def flush() -> None:
        nonlocal tokens, edits, prev_end
        if tokens is not None:
            sets.append(EditSet(TokenSequence(str(len(sets)), tokens), edits))
        tokens, edits, prev_end = None, [], 0

    for ln, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            flush()
        elif line == "S" or line.startswith("S "):
            if tokens is not None:
                raise FormatError(
                    f"line {ln}: new source line without separating blank line")
            tokens = line[2:].split()
        elif line.startswith("A "):
            if tokens is None:
                raise FormatError(f"line {ln}: edit line before any source line")
            edit = _parse_a_line(line, ln, tokens, prev_end)
            prev_end = max(prev_end, edit.src_end)
            edits.append(edit)
        else:
            raise FormatError(f"line {ln}: unrecognized line {line!r}")
    flush()
    return sets
