"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``).

All expected values are either published score triples checked against the
F0.5 formula, hand-worked outputs of the cat/mat utterance, or properties
checked against independent brute-force oracles.
"""
import random
import time
from collections import Counter

from sgectk import (ConfidenceEntry, EditSet, FilterPolicy, TokenSequence,
                    align, alignment_cost, attach_confidence, edit_confidence,
                    edit_counts, extract_edits, f_half, make_edit, match_edits,
                    modify_reference, parse_m2, project_edit,
                    read_confidence_jsonl, score_corpus, sweep, to_entry, wer,
                    with_confidences, write_confidence_jsonl, write_m2)
from sgectk.score import edits_compatible

from conftest import FLT_HYP, FLT_REF, GEC_REF, MILD, STRONG, seq


def check(cid, ok, detail=""):
    print(f"[{cid}] {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"{cid}: {detail}"


def timed(limit):
    start = time.monotonic()

    def done():
        elapsed = time.monotonic() - start
        return elapsed, elapsed < limit

    return done


# ---------------------------------------------------------------- AC1

PUBLISHED_TRIPLES = [
    (46.60, 26.61, 40.51),
    (43.92, 32.63, 41.08),
    (41.87, 33.06, 39.75),
    (49.43, 28.51, 43.10),
    (53.61, 26.29, 44.39),
]


def test_ac1_f_half_reproduces_published_triples():
    done = timed(1.0)
    worst = 0.0
    for p, r, f in PUBLISHED_TRIPLES:
        got = 100.0 * f_half(p / 100.0, r / 100.0)
        worst = max(worst, abs(got - f))
    elapsed, in_time = done()
    check("AC1", worst <= 0.02 and in_time,
          f"max |F0.5 error| = {worst:.4f} (tol 0.02), {elapsed:.2f}s")


# ---------------------------------------------------------------- AC2

def test_ac2_worked_example_end_to_end():
    done = timed(1.0)
    flt_ref, gec_ref, flt_hyp = seq(FLT_REF), seq(GEC_REF), seq(FLT_HYP)

    ref_edits = extract_edits(flt_ref, gec_ref)
    hyp_edits = extract_edits(flt_hyp, gec_ref)
    ok = [(e.kind, e.src_text, e.corr_text) for e in ref_edits.edits] == [
        ("R", ["rest"], ["rested"])]
    ok &= [(e.kind, e.src_text, e.corr_text) for e in hyp_edits.edits] == [
        ("R", ["rat"], ["cat"]), ("R", ["rest"], ["rested"]), ("M", [], ["the"])]

    result = match_edits(hyp_edits, ref_edits,
                         align(flt_hyp.tokens, flt_ref.tokens))
    ok &= (result.tp, result.fp, result.fn) == (1, 2, 0)

    mod = modify_reference(flt_hyp, flt_ref, gec_ref)
    ok &= mod.mild.text() == MILD
    ok &= mod.strong.text() == STRONG

    strong_edits = extract_edits(flt_hyp, mod.strong)
    ok &= [(e.kind, e.src_text, e.corr_text) for e in strong_edits.edits] == [
        ("R", ["rest"], ["rested"])]

    elapsed, in_time = done()
    check("AC2", bool(ok) and in_time,
          f"1 ref edit, 3 hyp edits, tp/fp/fn=1/2/0, mild/strong exact, {elapsed:.2f}s")


# ---------------------------------------------------------------- AC3

def _brute_force_distance(a, b):
    memo = {}

    def rec(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        if (i, j) not in memo:
            best = rec(i - 1, j - 1) + (a[i - 1] != b[j - 1])
            memo[(i, j)] = min(best, rec(i - 1, j) + 1, rec(i, j - 1) + 1)
        return memo[(i, j)]

    return rec(len(a), len(b))


def _spans_partition(ops, a, b):
    spos = tpos = 0
    prev = None
    for op in ops:
        if op.src_start != spos or op.tgt_start != tpos or op.kind == prev:
            return False
        if op.kind == "equal" and a[op.src_start:op.src_end] != b[op.tgt_start:op.tgt_end]:
            return False
        if op.kind == "ins" and op.src_len != 0:
            return False
        if op.kind == "del" and op.tgt_len != 0:
            return False
        spos, tpos, prev = op.src_end, op.tgt_end, op.kind
    return spos == len(a) and tpos == len(b)


def test_ac3_alignment_matches_brute_force_oracle():
    done = timed(30.0)
    rng = random.Random(42)
    vocab = ["v0", "v1", "v2", "v3", "v4"]
    n = 0
    for _ in range(1200):
        a = [rng.choice(vocab) for _ in range(rng.randint(0, 8))]
        b = [rng.choice(vocab) for _ in range(rng.randint(0, 8))]
        ops = align(a, b)
        if alignment_cost(ops) != _brute_force_distance(a, b):
            check("AC3", False, f"cost mismatch on {a} vs {b}")
        if not _spans_partition(ops, a, b):
            check("AC3", False, f"partition violated on {a} vs {b}")
        n += 1
    elapsed, in_time = done()
    check("AC3", n >= 1000 and in_time, f"{n} random pairs, {elapsed:.2f}s")


# ---------------------------------------------------------------- AC4

def _random_tokens(rng, vocab, lo=0, hi=7):
    return [rng.choice(vocab) for _ in range(rng.randint(lo, hi))]


def test_ac4_refmod_identity_and_containment():
    done = timed(30.0)
    rng = random.Random(271)
    vocab = ["a", "b", "c", "d"]

    for _ in range(600):
        hr = _random_tokens(rng, vocab)
        c = _random_tokens(rng, vocab)
        result = modify_reference(TokenSequence("u", list(hr)),
                                  TokenSequence("u", list(hr)),
                                  TokenSequence("u", c))
        if result.mild.tokens != c or result.strong.tokens != c:
            check("AC4", False, f"identity violated for H=R={hr}, C={c}")

    for _ in range(600):
        h = _random_tokens(rng, vocab)
        r = _random_tokens(rng, vocab)
        c = _random_tokens(rng, vocab)
        result = modify_reference(TokenSequence("u", h), TokenSequence("u", r),
                                  TokenSequence("u", c))
        strong_c = Counter((lo, hi) for o, lo, hi in result.strong_segments if o == "C")
        mild_c = Counter((lo, hi) for o, lo, hi in result.mild_segments if o == "C")
        if not all(mild_c[span] >= k for span, k in strong_c.items()):
            check("AC4", False, f"containment violated for H={h}, R={r}, C={c}")

    elapsed, in_time = done()
    check("AC4", in_time, f"600 identity + 600 containment triples, {elapsed:.2f}s")


# ---------------------------------------------------------------- AC5

def test_ac5_confidence_mode_algebra():
    done = timed(10.0)
    rng = random.Random(99)
    modes = ("flt_avg", "flt_min", "gec_avg", "gec_min", "avg", "min")

    for i in range(1200):
        kind = rng.choice("RMU")
        n = rng.randint(1, 4) if kind != "M" else 0
        m = rng.randint(1, 4) if kind != "U" else 0
        flt_conf = [round(rng.random(), 6) for _ in range(n)]
        gec_conf = [round(rng.random(), 6) for _ in range(m)]
        edit = make_edit(0, n, ["x"] * n, ["y"] * m)
        from sgectk import ConfidencedSequence
        flt = ConfidencedSequence("u", [("x", v) for v in flt_conf])
        gec = ConfidencedSequence("u", [("y", v) for v in gec_conf])
        span = (0, m)

        val = {mode: edit_confidence(edit, flt, gec, span, FilterPolicy(mode=mode))
               for mode in modes}
        ok = val["min"] <= val["avg"] + 1e-12
        ok &= val["flt_min"] <= val["flt_avg"] + 1e-12
        ok &= val["gec_min"] <= val["gec_avg"] + 1e-12
        if kind == "M":
            ok &= val["flt_avg"] == 1.0 and val["flt_min"] == 1.0
            ok &= val["min"] == min(gec_conf)
            ok &= abs(val["avg"] - (1.0 + val["gec_avg"]) / 2) < 1e-12
        if kind == "U":
            ok &= val["gec_avg"] == 1.0 and val["gec_min"] == 1.0
            ok &= val["min"] == min(flt_conf)
            ok &= abs(val["avg"] - (val["flt_avg"] + 1.0) / 2) < 1e-12
        if not ok:
            check("AC5", False, f"mode algebra violated on case {i} ({kind})")

        c = round(rng.random(), 6)
        const_flt = ConfidencedSequence("u", [("x", c)] * n)
        const_gec = ConfidencedSequence("u", [("y", c)] * m)
        vals = [edit_confidence(edit, const_flt, const_gec, span,
                                FilterPolicy(mode=mode, default_fill=c))
                for mode in modes]
        if any(abs(v - c) > 1e-12 for v in vals):
            check("AC5", False, f"constant-confidence collapse violated on case {i}")

    elapsed, in_time = done()
    check("AC5", in_time, f"1200 random edits across R/M/U, {elapsed:.2f}s")


# ---------------------------------------------------------------- AC6

def _random_edit_sentence(rng, vocab, base):
    out = list(base)
    for _ in range(rng.randint(0, 3)):
        op = rng.choice("smu")
        if op == "s" and out:
            out[rng.randrange(len(out))] = rng.choice(vocab)
        elif op == "m":
            out.insert(rng.randrange(len(out) + 1), rng.choice(vocab))
        elif op == "u" and len(out) > 1:
            del out[rng.randrange(len(out))]
    return out


def _synthetic_corpus(rng, utterances):
    vocab = ["w%d" % i for i in range(12)]
    hyp_sets, ref_sets = [], []
    for i in range(utterances):
        flt_ref = [rng.choice(vocab) for _ in range(rng.randint(3, 12))]
        gec_ref = _random_edit_sentence(rng, vocab, flt_ref)
        flt_hyp = _random_edit_sentence(rng, vocab, flt_ref)
        gec_hyp = _random_edit_sentence(rng, vocab, gec_ref)
        utt = f"u{i:03d}"
        hyp = extract_edits(TokenSequence(utt, flt_hyp), TokenSequence(utt, gec_hyp))
        hyp = with_confidences(hyp, [rng.random() for _ in hyp.edits])
        ref = extract_edits(TokenSequence(utt, flt_ref), TokenSequence(utt, gec_ref))
        hyp_sets.append(hyp)
        ref_sets.append(ref)
    return hyp_sets, ref_sets


def test_ac6_sweep_monotonicity_and_zero_row():
    done = timed(10.0)
    rng = random.Random(2024)
    hyp_sets, ref_sets = _synthetic_corpus(rng, 200)
    taus = [i / 100 for i in range(101)]
    rows = sweep(hyp_sets, ref_sets, taus)

    ok = len(rows) == 101
    for earlier, later in zip(rows, rows[1:]):
        ok &= later.kept <= earlier.kept
        ok &= later.recall <= earlier.recall

    plain = score_corpus(hyp_sets, ref_sets)
    zero = rows[0]
    ok &= (zero.precision, zero.recall, zero.f_half) == (
        plain.precision, plain.recall, plain.f_half)
    ok &= zero.kept == sum(len(es.edits) for es in hyp_sets)

    elapsed, in_time = done()
    check("AC6", bool(ok) and in_time,
          f"200 utterances x 101 thresholds, zero row bit-exact, {elapsed:.2f}s")


# ---------------------------------------------------------------- AC7

def _max_matching(hyp, ref, bridge):
    spans = [project_edit(h, bridge) for h in hyp.edits]
    compat = [[edits_compatible(h, s, r) for r in ref.edits]
              for h, s in zip(hyp.edits, spans)]

    def best(i, used):
        if i == len(hyp.edits):
            return 0
        top = best(i + 1, used)
        for j in range(len(ref.edits)):
            if compat[i][j] and not used & (1 << j):
                top = max(top, 1 + best(i + 1, used | (1 << j)))
        return top

    return best(0, 0)


def test_ac7_greedy_matching_equals_exhaustive_maximum():
    done = timed(30.0)
    rng = random.Random(777)
    vocab = ["t%d" % i for i in range(8)]
    checked = 0
    deficit = 0
    while checked < 250:
        flt_ref = [rng.choice(vocab) for _ in range(rng.randint(2, 10))]
        gec_ref = _random_edit_sentence(rng, vocab, flt_ref)
        flt_hyp = _random_edit_sentence(rng, vocab, flt_ref)
        gec_hyp = _random_edit_sentence(rng, vocab, gec_ref)
        hyp = extract_edits(TokenSequence("u", flt_hyp), TokenSequence("u", gec_hyp))
        ref = extract_edits(TokenSequence("u", flt_ref), TokenSequence("u", gec_ref))
        if len(hyp.edits) > 6 or len(ref.edits) > 6:
            continue
        bridge = align(flt_hyp, flt_ref)
        greedy = match_edits(hyp, ref, bridge).tp
        exact = _max_matching(hyp, ref, bridge)
        if greedy != exact:
            print(f"[AC7] discrepancy: greedy={greedy} exhaustive={exact} "
                  f"hyp={flt_hyp} ref={flt_ref}")
            deficit += exact - greedy
        checked += 1
    elapsed, in_time = done()
    check("AC7", deficit == 0 and in_time,
          f"{checked} utterances, total tp deficit {deficit}, {elapsed:.2f}s")


# ---------------------------------------------------------------- AC8

def test_ac8_serialization_round_trips():
    done = timed(10.0)
    rng = random.Random(31)
    vocab = ["a", "b", "c", "d", "e"]

    sets = []
    for i in range(520):
        fluent = [rng.choice(vocab) for _ in range(rng.randint(0, 8))]
        corrected = [rng.choice(vocab) for _ in range(rng.randint(0, 8))]
        sets.append(extract_edits(TokenSequence(str(i), fluent),
                                  TokenSequence(str(i), corrected)))
    # parse assigns positional ids, so renumber to match before comparing
    sets = [EditSet(TokenSequence(str(i), es.source.tokens), es.edits)
            for i, es in enumerate(sets)]
    content = write_m2(sets)
    parsed = parse_m2(content)
    ok = parsed == sets and write_m2(parsed) == content

    entries = []
    for i in range(520):
        toks = [(rng.choice(vocab), round(rng.random(), 8))
                for _ in range(rng.randint(0, 6))]
        entries.append(ConfidenceEntry(f"c{i}", toks))
    text = write_confidence_jsonl(entries)
    ok &= read_confidence_jsonl(text) == entries
    ok &= write_confidence_jsonl(read_confidence_jsonl(text)) == text

    for entry in entries[:500]:
        series = TokenSequence(entry.utt_id, [t for t, _ in entry.tokens])
        attached = attach_confidence(series, entry)
        if to_entry(attached) != entry:
            ok = False
            break

    elapsed, in_time = done()
    check("AC8", bool(ok) and in_time,
          f"520 m2 sets + 520 confidence entries round-trip, {elapsed:.2f}s")


# ---------------------------------------------------------------- AC9

def test_ac9_wer_sanity():
    done = timed(10.0)
    identical = wer("a b c".split(), "a b c".split())
    ok = identical.rate == 0.0

    demo = wer(GEC_REF.split(), FLT_HYP.split())
    ok &= abs(demo.rate - 3 / 7) < 1e-4

    rng = random.Random(8)
    vocab = ["a", "b", "c"]
    for _ in range(500):
        ref = [rng.choice(vocab) for _ in range(rng.randint(0, 7))]
        hyp = [rng.choice(vocab) for _ in range(rng.randint(0, 7))]
        subs, dels, ins, hits = edit_counts(ref, hyp)
        if subs + dels + hits != len(ref) or subs + ins + hits != len(hyp):
            check("AC9", False, f"count identity violated on {ref} vs {hyp}")

    elapsed, in_time = done()
    check("AC9", bool(ok) and in_time,
          f"identity 0.0, worked example 0.4286, 500 random count checks, {elapsed:.2f}s")
