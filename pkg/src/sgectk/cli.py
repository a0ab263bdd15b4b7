"""Batch command-line surface for the transcript-side pipeline.

Subcommands: wer, edits, refmod, score, filter, sweep, validate.

Exit codes: 0 success, 2 usage, 3 I/O failure, 4 file format error,
5 validation/structural error. All commands are deterministic: identical
inputs and configuration produce byte-identical outputs.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .align import WerReport, wer
from .confidence import (MODES, ConfidenceEntry, FilterPolicy, attach_confidence,
                         filter_edits, read_confidence_jsonl, score_edit_set)
from .corpusio import (Corpus, CorpusBundle, load_corpus, save_corpus,
                       validate_bundle)
from .edits import EditSet, extract_edits, parse_m2, write_m2
from .errors import FormatError, StructuralError, ValidationError
from .refmod import modify_corpus
from .score import format_sweep_tsv, score_corpus, sweep
from .textnorm import NormConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_VALIDATION = 5


class UsageError(Exception):
    pass


def _norm_config(args) -> NormConfig:
    return NormConfig(lowercase=not args.norm_keep_case,
                      strip_punct=not args.norm_keep_punct)


def _require_same_ids(corpora: dict[str, Corpus]) -> None:
    all_ids: dict[str, None] = {}
    for corpus in corpora.values():
        for utt_id in corpus.ids():
            all_ids.setdefault(utt_id)
    problems = []
    for name, corpus in corpora.items():
        missing = [utt_id for utt_id in all_ids if utt_id not in corpus]
        if missing:
            problems.append(f"{name} missing ids: {', '.join(missing)}")
    if problems:
        raise ValidationError("; ".join(problems))


def _write_output(path: str | None, content: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(content)
    else:
        Path(path).write_text(content, encoding="utf-8", newline="\n")


def _read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit_report(args, pairs: list[tuple[str, object]]) -> None:
    if args.json:
        print(json.dumps(dict(pairs)))
    else:
        width = max(len(name) for name, _ in pairs)
        for name, value in pairs:
            if isinstance(value, float):
                value = f"{value:.4f}"
            print(f"{name:<{width}}  {value}")


# ---------------------------------------------------------------- wer

def cmd_wer(args) -> int:
    cfg = _norm_config(args)
    ref = load_corpus(args.ref, cfg)
    hyp = load_corpus(args.hyp, cfg)
    _require_same_ids({"ref": ref, "hyp": hyp})

    total = WerReport(0, 0, 0, 0, 0)
    per_utt = []
    for r in ref:
        report = wer(r.tokens, hyp.get(r.utt_id).tokens)
        total = total + report
        per_utt.append((r.utt_id, report))

    if args.json:
        obj = {"ref_len": total.ref_len, "subs": total.subs, "dels": total.dels,
               "ins": total.ins, "hits": total.hits, "errors": total.errors,
               "wer": total.rate}
        if args.per_utt:
            obj["per_utt"] = [
                {"utt_id": utt_id, "subs": rep.subs, "dels": rep.dels,
                 "ins": rep.ins, "hits": rep.hits, "wer": rep.rate}
                for utt_id, rep in per_utt]
        print(json.dumps(obj))
        return EXIT_OK

    if args.per_utt:
        for utt_id, rep in per_utt:
            rate = f"{rep.rate:.4f}" if rep.rate is not None else "undefined"
            print(f"{utt_id}\t{rate}\tS={rep.subs}\tD={rep.dels}\tI={rep.ins}\tH={rep.hits}")
    rate = f"{total.rate:.4f}" if total.rate is not None else "undefined"
    _emit_report(args, [("ref_len", total.ref_len), ("subs", total.subs),
                        ("dels", total.dels), ("ins", total.ins),
                        ("hits", total.hits), ("errors", total.errors),
                        ("wer", rate)])
    return EXIT_OK


# ---------------------------------------------------------------- edits

def _extract_corpus_edits(flt: Corpus, gec: Corpus) -> list[EditSet]:
    _require_same_ids({"flt": flt, "gec": gec})
    return [extract_edits(seq, gec.get(seq.utt_id)) for seq in flt]


def cmd_edits(args) -> int:
    if args.parse:
        if args.flt or args.gec:
            raise UsageError("--parse cannot be combined with --flt/--gec")
        sets = parse_m2(_read_text(args.parse))
    else:
        if not (args.flt and args.gec):
            raise UsageError("edits requires --flt and --gec (or --parse)")
        cfg = _norm_config(args)
        sets = _extract_corpus_edits(load_corpus(args.flt, cfg), load_corpus(args.gec, cfg))
    _write_output(args.out, write_m2(sets))
    return EXIT_OK


# ---------------------------------------------------------------- refmod

def cmd_refmod(args) -> int:
    cfg = _norm_config(args)
    mild, strong = modify_corpus(load_corpus(args.flt_hyp, cfg),
                                 load_corpus(args.flt_ref, cfg),
                                 load_corpus(args.gec_ref, cfg))
    save_corpus(mild, args.out_mild)
    save_corpus(strong, args.out_strong)
    return EXIT_OK


# ---------------------------------------------------------------- score / filter / sweep

def _load_conf_map(path, name: str) -> dict[str, ConfidenceEntry]:
    entries = read_confidence_jsonl(_read_text(path), name=str(path))
    return {e.utt_id: e for e in entries}


def _scored_hyp_sets(args, cfg: NormConfig, policy: FilterPolicy) -> list[EditSet]:
    """Hypothesis edit sets with confidences attached."""
    flt = load_corpus(args.flt_hyp, cfg)
    gec = load_corpus(args.gec_hyp, cfg)
    sets = _extract_corpus_edits(flt, gec)
    flt_conf = _load_conf_map(args.flt_conf, "flt_conf")
    gec_conf = _load_conf_map(args.gec_conf, "gec_conf")
    missing = [es.utt_id for es in sets
               if es.utt_id not in flt_conf or es.utt_id not in gec_conf]
    if missing:
        raise ValidationError(f"confidence entries missing for: {', '.join(missing)}")
    scored = []
    for es in sets:
        flt_cs = attach_confidence(flt.get(es.utt_id), flt_conf[es.utt_id], cfg)
        gec_cs = attach_confidence(gec.get(es.utt_id), gec_conf[es.utt_id], cfg)
        scored.append(score_edit_set(es, flt_cs, gec_cs, policy))
    return scored


def _hyp_side(args, cfg: NormConfig, policy: FilterPolicy | None) -> tuple[list[EditSet], bool]:
    """Returns (sets, from_m2). With a policy, confidences are attached."""
    if args.hyp_m2:
        if args.flt_hyp or args.gec_hyp:
            raise UsageError("--hyp-m2 cannot be combined with --flt-hyp/--gec-hyp")
        if policy is not None:
            raise UsageError("confidence filtering requires --flt-hyp/--gec-hyp "
                             "transcripts (confidence files pair by utt_id)")
        return parse_m2(_read_text(args.hyp_m2)), True
    if not (args.flt_hyp and args.gec_hyp):
        raise UsageError("hypothesis side requires --hyp-m2 or both --flt-hyp and --gec-hyp")
    if policy is not None:
        return _scored_hyp_sets(args, cfg, policy), False
    flt = load_corpus(args.flt_hyp, cfg)
    gec = load_corpus(args.gec_hyp, cfg)
    return _extract_corpus_edits(flt, gec), False


def _ref_side(args, cfg: NormConfig) -> tuple[list[EditSet], bool]:
    if args.ref_m2:
        if args.flt_ref or args.gec_ref:
            raise UsageError("--ref-m2 cannot be combined with --flt-ref/--gec-ref")
        return parse_m2(_read_text(args.ref_m2)), True
    if not (args.flt_ref and args.gec_ref):
        raise UsageError("reference side requires --ref-m2 or both --flt-ref and --gec-ref")
    flt = load_corpus(args.flt_ref, cfg)
    gec = load_corpus(args.gec_ref, cfg)
    return _extract_corpus_edits(flt, gec), False


def _pairing_mode(hyp_sets, ref_sets, hyp_m2: bool, ref_m2: bool):
    """When either side lost its ids to the m2 format, force positional pairing
    by checking lengths up front."""
    if (hyp_m2 or ref_m2) and len(hyp_sets) != len(ref_sets):
        raise ValidationError(
            f"hypothesis has {len(hyp_sets)} utterances but reference has "
            f"{len(ref_sets)}; m2 inputs pair positionally")
    if hyp_m2 or ref_m2:
        return list(hyp_sets), list(ref_sets), True
    return list(hyp_sets), list(ref_sets), False


def _policy_from(args) -> FilterPolicy | None:
    has_conf = bool(args.flt_conf or args.gec_conf)
    if not has_conf:
        if args.tau is not None:
            raise UsageError("--tau requires --flt-conf and --gec-conf")
        if args.mode is not None or args.default_fill is not None:
            raise UsageError("--mode/--default-fill require --flt-conf and --gec-conf")
        return None
    if not (args.flt_conf and args.gec_conf):
        raise UsageError("confidence scoring requires both --flt-conf and --gec-conf")
    mode = args.mode if args.mode is not None else "avg"
    tau = args.tau if args.tau is not None else 0.0
    fill = args.default_fill if args.default_fill is not None else 1.0
    try:
        return FilterPolicy(mode=mode, threshold=tau, default_fill=fill)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_score(args) -> int:
    cfg = _norm_config(args)
    policy = _policy_from(args)
    hyp_sets, hyp_m2 = _hyp_side(args, cfg, policy)
    ref_sets, ref_m2 = _ref_side(args, cfg)
    hyp_sets, ref_sets, positional = _pairing_mode(hyp_sets, ref_sets, hyp_m2, ref_m2)
    if positional:
        pairs = list(zip(hyp_sets, ref_sets))
    else:
        _require_same_ids_sets(hyp_sets, ref_sets)
        by_id = {es.utt_id: es for es in ref_sets}
        pairs = [(h, by_id[h.utt_id]) for h in hyp_sets]
    if policy is not None:
        pairs = [(filter_edits(h, policy), r) for h, r in pairs]
    report = score_corpus([h for h, _ in pairs], [r for _, r in pairs],
                          bridges=None)
    if args.json:
        print(json.dumps(report.as_dict()))
    else:
        _emit_report(args, [("tp", report.tp), ("fp", report.fp), ("fn", report.fn),
                            ("precision", report.precision), ("recall", report.recall),
                            ("f0.5", report.f_half)])
    return EXIT_OK


def _require_same_ids_sets(hyp_sets: list[EditSet], ref_sets: list[EditSet]) -> None:
    hyp_ids = {es.utt_id for es in hyp_sets}
    ref_ids = {es.utt_id for es in ref_sets}
    if hyp_ids != ref_ids:
        only_h = sorted(hyp_ids - ref_ids)
        only_r = sorted(ref_ids - hyp_ids)
        parts = []
        if only_h:
            parts.append(f"only in hypothesis: {', '.join(only_h)}")
        if only_r:
            parts.append(f"only in reference: {', '.join(only_r)}")
        raise ValidationError("utterance ids disagree; " + "; ".join(parts))


def cmd_filter(args) -> int:
    cfg = _norm_config(args)
    policy = _policy_from(args)
    if policy is None:
        raise UsageError("filter requires --flt-conf and --gec-conf")
    scored = _scored_hyp_sets(args, cfg, policy)
    filtered = [filter_edits(es, policy) for es in scored]
    _write_output(args.out, write_m2(filtered))
    return EXIT_OK


def _parse_thresholds(args) -> list[float]:
    if args.thresholds is not None:
        try:
            taus = [float(part) for part in args.thresholds.split(",") if part.strip() != ""]
        except ValueError:
            raise UsageError(f"cannot parse --thresholds {args.thresholds!r}") from None
    else:
        points = args.grid if args.grid is not None else 101
        if points < 2:
            raise UsageError("--grid needs at least 2 points")
        taus = [i / (points - 1) for i in range(points)]
    if taus != sorted(taus):
        raise UsageError("thresholds must be sorted ascending")
    for tau in taus:
        if not 0.0 <= tau <= 1.0:
            raise UsageError(f"threshold {tau} outside [0, 1]")
    return taus


def cmd_sweep(args) -> int:
    cfg = _norm_config(args)
    args.tau = None  # sweep supplies its own thresholds
    policy = _policy_from(args)
    if policy is None:
        raise UsageError("sweep requires --flt-conf and --gec-conf")
    thresholds = _parse_thresholds(args)
    hyp_sets = _scored_hyp_sets(args, cfg, policy)
    ref_sets, ref_m2 = _ref_side(args, cfg)
    hyp_sets, ref_sets, positional = _pairing_mode(hyp_sets, ref_sets, False, ref_m2)
    if not positional:
        _require_same_ids_sets(hyp_sets, ref_sets)
    rows = sweep(hyp_sets, ref_sets, thresholds)
    _write_output(args.out, format_sweep_tsv(rows))
    return EXIT_OK


# ---------------------------------------------------------------- validate

def cmd_validate(args) -> int:
    cfg = _norm_config(args)
    bundle = CorpusBundle()
    given = False
    for name in ("flt_hyp", "flt_ref", "gec_hyp", "gec_ref"):
        path = getattr(args, name)
        if path:
            setattr(bundle, name, load_corpus(path, cfg))
            given = True
    for name in ("flt_conf", "gec_conf"):
        path = getattr(args, name)
        if path:
            setattr(bundle, name, read_confidence_jsonl(_read_text(path), name=str(path)))
            given = True
    if not given:
        raise UsageError("validate requires at least one input file")
    report = validate_bundle(bundle, cfg)
    if args.json:
        print(json.dumps({
            "ok": report.ok(),
            "missing": [{"member": m, "utt_id": u} for m, u in report.missing],
            "mismatches": [{"member": m, "utt_id": u, "detail": d}
                           for m, u, d in report.mismatches]}))
    else:
        if report.ok():
            print("ok")
        else:
            for line in report.lines():
                print(line)
    return EXIT_OK if report.ok() else EXIT_VALIDATION


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--norm-keep-punct", action="store_true",
                        help="do not strip edge punctuation during normalization")
    common.add_argument("--norm-keep-case", action="store_true",
                        help="do not lowercase during normalization")
    common.add_argument("--json", action="store_true",
                        help="emit machine-readable JSON reports")
    common.add_argument("--config", metavar="FILE",
                        help="JSON config supplying defaults for any flag; "
                             "explicit flags win")

    parser = argparse.ArgumentParser(
        prog="sgectk",
        description="Transcript-side pipeline for spoken grammatical error "
                    "correction feedback: alignment, edits, reference "
                    "modification, confidence filtering, and scoring.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wer", parents=[common], help="word error rate of hyp vs ref")
    p.add_argument("--ref", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--per-utt", action="store_true", help="per-utterance breakdown")
    p.set_defaults(func=cmd_wer)

    p = sub.add_parser("edits", parents=[common],
                       help="extract edits from fluent/corrected transcripts into m2")
    p.add_argument("--flt", help="fluent transcript TSV")
    p.add_argument("--gec", help="corrected transcript TSV")
    p.add_argument("--parse", metavar="M2", help="re-serialize an existing m2 file instead")
    p.add_argument("--out", help="output m2 path (default stdout)")
    p.set_defaults(func=cmd_edits)

    p = sub.add_parser("refmod", parents=[common],
                       help="rewrite corrected references against the fluent hypothesis")
    p.add_argument("--flt-hyp", required=True)
    p.add_argument("--flt-ref", required=True)
    p.add_argument("--gec-ref", required=True)
    p.add_argument("--out-mild", required=True)
    p.add_argument("--out-strong", required=True)
    p.set_defaults(func=cmd_refmod)

    def add_conf_opts(p):
        p.add_argument("--flt-conf", help="fluent-side confidence JSONL")
        p.add_argument("--gec-conf", help="corrected-side confidence JSONL")
        p.add_argument("--mode", choices=MODES, default=None,
                       help="edit confidence mode (default avg)")
        p.add_argument("--default-fill", type=float, default=None,
                       help="confidence for the absent side of M/U edits (default 1.0)")

    p = sub.add_parser("score", parents=[common],
                       help="precision/recall/F0.5 of hypothesis edits vs reference edits")
    p.add_argument("--hyp-m2", help="hypothesis edits as m2")
    p.add_argument("--flt-hyp")
    p.add_argument("--gec-hyp")
    p.add_argument("--ref-m2", help="reference edits as m2")
    p.add_argument("--flt-ref")
    p.add_argument("--gec-ref")
    add_conf_opts(p)
    p.add_argument("--tau", type=float, default=None,
                   help="drop hypothesis edits below this confidence")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("filter", parents=[common],
                       help="write hypothesis edits surviving a confidence threshold")
    p.add_argument("--flt-hyp", required=True)
    p.add_argument("--gec-hyp", required=True)
    add_conf_opts(p)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--out", help="output m2 path (default stdout)")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("sweep", parents=[common],
                       help="score at a series of confidence thresholds (TSV)")
    p.add_argument("--flt-hyp", required=True)
    p.add_argument("--gec-hyp", required=True)
    p.add_argument("--ref-m2")
    p.add_argument("--flt-ref")
    p.add_argument("--gec-ref")
    add_conf_opts(p)
    p.add_argument("--thresholds", help="comma-separated ascending taus")
    p.add_argument("--grid", type=int, default=None,
                   help="evenly spaced points over [0, 1] (default 101)")
    p.add_argument("--out", help="output TSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", parents=[common],
                       help="check a bundle of transcript/confidence files for consistency")
    p.add_argument("--flt-hyp")
    p.add_argument("--flt-ref")
    p.add_argument("--gec-hyp")
    p.add_argument("--gec-ref")
    p.add_argument("--flt-conf")
    p.add_argument("--gec-conf")
    p.set_defaults(func=cmd_validate)

    return parser


def _apply_config(args) -> None:
    try:
        cfg = json.loads(_read_text(args.config))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{args.config}: invalid JSON ({exc.msg})") from None
    if not isinstance(cfg, dict):
        raise FormatError(f"{args.config}: config must be a JSON object")
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr) or attr in ("func", "command", "config"):
            raise FormatError(f"{args.config}: unknown config key {key!r}")
        current = getattr(args, attr)
        if current is None or current is False:
            setattr(args, attr, value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "config", None):
            _apply_config(args)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (ValidationError, StructuralError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
