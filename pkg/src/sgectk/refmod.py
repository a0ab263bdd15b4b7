"""Reference modification: rewrite a corrected reference so that ASR-induced
discrepancies with the fluent hypothesis stop looking like grammar edits.

Inputs per utterance: the fluent hypothesis H (system output), the fluent
reference R (human transcription), and the corrected reference C. Two word
alignments drive the rewrite, C->H and C->R. Walking the C->H opcodes:

  equal          keep the C span in both outputs.
  ins / del      mild keeps the C span unconditionally (lenient mode).
  any non-equal  strong keeps the C span only when the C->R alignment
                 corroborates the discrepancy: it contains an opcode of the
                 same kind whose R-side content equals this opcode's H-side
                 content. A corroborated sub keeps its C span in mild too.
                 Uncorroborated opcodes emit the H span instead, so the
                 output stops disagreeing with what the recognizer heard.

Corroboration scans C->R left to right and stops at the first match; matched
opcodes are not consumed, so one R-side discrepancy can corroborate several
H-side ones. When H equals R the two alignments coincide, every opcode is
self-corroborated, and both outputs reproduce C exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

from .align import DEL, EQUAL, INS, SUB, align
from .corpusio import Corpus
from .errors import ValidationError
from .textnorm import TokenSequence

# A kept segment: (which text it came from, start, end). Spans index into
# the corrected reference for "C" and into the fluent hypothesis for "H".
Segment = tuple[str, int, int]


@dataclass
class RefModResult:
    mild: TokenSequence
    strong: TokenSequence
    mild_segments: list[Segment]
    strong_segments: list[Segment]


def modify_reference(flt_hyp: TokenSequence, flt_ref: TokenSequence,
                     gec_ref: TokenSequence) -> RefModResult:
    """Produce the mild and strong rewrites of ``gec_ref``.

    All three sequences must have been normalized with the same NormConfig.
    Every output token is drawn from gec_ref or flt_hyp.
    """
    h = list(flt_hyp.tokens) if isinstance(flt_hyp, TokenSequence) else list(flt_hyp)
    r = list(flt_ref.tokens) if isinstance(flt_ref, TokenSequence) else list(flt_ref)
    c = list(gec_ref.tokens) if isinstance(gec_ref, TokenSequence) else list(gec_ref)

    to_hyp = align(c, h)
    to_ref = align(c, r)

    mild: list[Segment] = []
    strong: list[Segment] = []
    for op in to_hyp:
        if op.kind == EQUAL:
            mild.append(("C", op.src_start, op.src_end))
            strong.append(("C", op.src_start, op.src_end))
            continue

        f_mild = f_strong = False
        if op.kind in (INS, DEL):
            mild.append(("C", op.src_start, op.src_end))
            f_mild = True

        h_segment = h[op.tgt_start:op.tgt_end]
        for alt in to_ref:
            if alt.kind == op.kind and r[alt.tgt_start:alt.tgt_end] == h_segment:
                strong.append(("C", op.src_start, op.src_end))
                f_strong = True
                if op.kind == SUB:
                    mild.append(("C", op.src_start, op.src_end))
                    f_mild = True
                break

        if not f_mild:
            mild.append(("H", op.tgt_start, op.tgt_end))
        if not f_strong:
            strong.append(("H", op.tgt_start, op.tgt_end))

    utt_id = gec_ref.utt_id if isinstance(gec_ref, TokenSequence) else ""

    def build(segments: list[Segment]) -> TokenSequence:
        out: list[str] = []
        for origin, start, end in segments:
            out.extend(c[start:end] if origin == "C" else h[start:end])
        return TokenSequence(utt_id, out)

    return RefModResult(build(mild), build(strong), mild, strong)


def modify_corpus(flt_hyps: Corpus, flt_refs: Corpus,
                  gec_refs: Corpus) -> tuple[Corpus, Corpus]:
    """Apply modify_reference per utterance; output order follows ``flt_hyps``.

    The three corpora must cover the same utterance ids; offending ids are
    listed in the raised ValidationError otherwise.
    """
    members = {"flt_hyp": flt_hyps, "flt_ref": flt_refs, "gec_ref": gec_refs}
    all_ids: dict[str, None] = {}
    for corpus in members.values():
        for utt_id in corpus.ids():
            all_ids.setdefault(utt_id)
    problems = []
    for name, corpus in members.items():
        missing = [utt_id for utt_id in all_ids if utt_id not in corpus]
        if missing:
            problems.append(f"{name} missing ids: {', '.join(missing)}")
    if problems:
        raise ValidationError("; ".join(problems))

    mild_entries = []
    strong_entries = []
    for hyp in flt_hyps:
        result = modify_reference(hyp, flt_refs.get(hyp.utt_id), gec_refs.get(hyp.utt_id))
        mild_entries.append(result.mild)
        strong_entries.append(result.strong)
    return Corpus(mild_entries), Corpus(strong_entries)
