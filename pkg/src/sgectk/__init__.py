"""Transcript-side toolkit for spoken grammatical error correction feedback:
word alignment, R/M/U edit extraction, reference modification, edit
confidence filtering, and M2-style precision/recall/F0.5 scoring."""

from .align import (DEL, EQUAL, INS, SUB, AlignmentOp, WerReport, align,
                    alignment_cost, edit_counts, wer)
from .confidence import (MODES, ConfidenceEntry, ConfidencedSequence,
                         FilterPolicy, attach_confidence, edit_confidence,
                         filter_edits, read_confidence_jsonl, score_edit_set,
                         to_entry, write_confidence_jsonl)
from .corpusio import (BundleReport, Corpus, CorpusBundle, load_corpus,
                       parse_corpus, save_corpus, validate_bundle, write_corpus)
from .edits import (EDIT_KINDS, Edit, EditSet, apply_edits, corrected_spans,
                    extract_edits, make_edit, parse_m2, with_confidences,
                    write_m2)
from .errors import FormatError, StructuralError, ValidationError
from .refmod import RefModResult, modify_corpus, modify_reference
from .score import (MatchResult, ScoreReport, SweepRow, f_half,
                    format_sweep_tsv, match_edits, pair_sets, prf, prf_counts,
                    project_edit, project_span, score_corpus, spans_compatible,
                    sweep)
from .textnorm import (NormConfig, TokenSequence, detokenize, normalize,
                       normalize_text, normalize_token, tokenize)

__version__ = "0.1.0"
