#!/usr/bin/env python3
"""Walk the whole pipeline on the cat/mat utterance.

Shows the word alignment, the extracted reference and hypothesis edit sets,
the mild/strong reference rewrites, confidence scoring of each hypothesis
edit, and the resulting precision/recall/F0.5 with and without filtering.

Usage: python3 scripts/demo_pipeline.py
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from sgectk import (ConfidenceEntry, FilterPolicy, TokenSequence, align,
                    attach_confidence, extract_edits, filter_edits,
                    match_edits, modify_reference, prf, score_edit_set,
                    write_m2)

FLT_REF = "the cat calmly rest on the mat"
GEC_REF = "the cat calmly rested on the mat"
FLT_HYP = "the rat calmly rest on mat"


def seq(text):
    return TokenSequence("demo", text.split())


def show_edits(label, es):
    print(f"{label}:")
    if not es.edits:
        print("  (none)")
    for e in es.edits:
        src = " ".join(e.src_text) or "-"
        corr = " ".join(e.corr_text) or "-"
        conf = f"  conf={e.confidence:.3f}" if e.confidence is not None else ""
        print(f"  {e.kind}: {src} -> {corr}  @[{e.src_start},{e.src_end}){conf}")


def main():
    flt_ref, gec_ref, flt_hyp = seq(FLT_REF), seq(GEC_REF), seq(FLT_HYP)

    print(f"flt-ref: {FLT_REF}")
    print(f"gec-ref: {GEC_REF}")
    print(f"flt-hyp: {FLT_HYP}")
    print()

    print("alignment gec-ref -> flt-hyp:")
    for op in align(gec_ref.tokens, flt_hyp.tokens):
        src = " ".join(gec_ref.tokens[op.src_start:op.src_end]) or "-"
        tgt = " ".join(flt_hyp.tokens[op.tgt_start:op.tgt_end]) or "-"
        print(f"  {op.kind:<5} {src!r:>12} | {tgt!r}")
    print()

    ref_edits = extract_edits(flt_ref, gec_ref)
    hyp_edits = extract_edits(flt_hyp, gec_ref)
    show_edits("reference edits (flt-ref -> gec-ref)", ref_edits)
    show_edits("hypothesis edits (flt-hyp -> gec-ref)", hyp_edits)
    print()
    print("hypothesis edits as m2:")
    print(write_m2([hyp_edits]), end="")
    print()

    mod = modify_reference(flt_hyp, flt_ref, gec_ref)
    print(f"mild rewrite  : {mod.mild.text()}")
    print(f"strong rewrite: {mod.strong.text()}")
    show_edits("edits surviving the strong rewrite (vs flt-hyp)",
               extract_edits(flt_hyp, mod.strong))
    print()

    result = match_edits(hyp_edits, ref_edits, align(flt_hyp.tokens, flt_ref.tokens))
    report = prf(result)
    print(f"unfiltered: tp={report.tp} fp={report.fp} fn={report.fn}  "
          f"P={report.precision:.4f} R={report.recall:.4f} F0.5={report.f_half:.4f}")

    # Pretend the recognizer was unsure about the words it got wrong.
    flt_conf = attach_confidence(flt_hyp, ConfidenceEntry("demo", [
        ("the", 0.95), ("rat", 0.30), ("calmly", 0.92), ("rest", 0.88),
        ("on", 0.97), ("mat", 0.45)]))
    gec_conf = attach_confidence(gec_ref, ConfidenceEntry("demo", [
        ("the", 0.96), ("cat", 0.40), ("calmly", 0.93), ("rested", 0.90),
        ("on", 0.98), ("the", 0.50), ("mat", 0.91)]))
    policy = FilterPolicy(mode="avg", threshold=0.67)
    scored = score_edit_set(hyp_edits, flt_conf, gec_conf, policy)
    show_edits("hypothesis edits with avg confidence", scored)

    kept = filter_edits(scored, policy)
    result = match_edits(kept, ref_edits, align(flt_hyp.tokens, flt_ref.tokens))
    report = prf(result)
    print(f"tau={policy.threshold}: tp={report.tp} fp={report.fp} fn={report.fn}  "
          f"P={report.precision:.4f} R={report.recall:.4f} F0.5={report.f_half:.4f}")


if __name__ == "__main__":
    main()
