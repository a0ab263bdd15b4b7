#!/usr/bin/env python3
"""Threshold sweep on a synthetic corpus.

Generates a corpus of noisy fluent/corrected utterance pairs with random
token confidences, scores hypothesis edits in a chosen mode, and prints the
precision/recall/F0.5 sweep as TSV. Useful for eyeballing how the filtering
trade-off behaves before running on real transcripts.

Usage: python3 scripts/sweep_synthetic.py [--utterances N] [--points N]
       [--mode avg] [--seed 7]
"""
import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from sgectk import (ConfidenceEntry, FilterPolicy, TokenSequence,
                    attach_confidence, extract_edits, format_sweep_tsv,
                    score_edit_set, sweep)
from sgectk.confidence import MODES

VOCAB = [
    "the", "a", "cat", "dog", "sat", "sit", "on", "mat", "rug", "quietly",
    "then", "it", "slept", "sleeps", "near", "door",
]


def mutate(rng, base, max_ops=3):
    out = list(base)
    for _ in range(rng.randint(0, max_ops)):
        op = rng.choice("smu")
        if op == "s" and out:
            out[rng.randrange(len(out))] = rng.choice(VOCAB)
        elif op == "m":
            out.insert(rng.randrange(len(out) + 1), rng.choice(VOCAB))
        elif op == "u" and len(out) > 1:
            del out[rng.randrange(len(out))]
    return out


def confidences(rng, seq):
    return attach_confidence(seq, ConfidenceEntry(
        seq.utt_id, [(t, round(rng.random(), 4)) for t in seq.tokens]))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--utterances", type=int, default=200)
    ap.add_argument("--points", type=int, default=101)
    ap.add_argument("--mode", choices=MODES, default="avg")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    policy = FilterPolicy(mode=args.mode)
    hyp_sets, ref_sets = [], []
    for i in range(args.utterances):
        utt = f"syn{i:04d}"
        flt_ref = [rng.choice(VOCAB) for _ in range(rng.randint(3, 12))]
        gec_ref = mutate(rng, flt_ref)
        flt_hyp = mutate(rng, flt_ref, max_ops=2)   # ASR noise
        gec_hyp = mutate(rng, gec_ref, max_ops=2)   # model noise

        flt_hyp_seq = TokenSequence(utt, flt_hyp)
        gec_hyp_seq = TokenSequence(utt, gec_hyp)
        hyp = extract_edits(flt_hyp_seq, gec_hyp_seq)
        hyp = score_edit_set(hyp, confidences(rng, flt_hyp_seq),
                             confidences(rng, gec_hyp_seq), policy)
        hyp_sets.append(hyp)
        ref_sets.append(extract_edits(TokenSequence(utt, flt_ref),
                                      TokenSequence(utt, gec_ref)))

    taus = [i / (args.points - 1) for i in range(args.points)]
    sys.stdout.write(format_sweep_tsv(sweep(hyp_sets, ref_sets, taus)))


if __name__ == "__main__":
    main()
