"""Corpus ingestion and cross-file consistency checks.

Transcript files are UTF-8 TSV, one utterance per line::

    utt_id<TAB>text

Blank lines are ignored; duplicate ids and lines without a TAB are
rejected with their line number.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .confidence import ConfidenceEntry, attach_confidence
from .errors import FormatError, ValidationError
from .textnorm import NormConfig, TokenSequence, normalize, tokenize


@dataclass
class Corpus:
    """Ordered utterances with unique ids, indexable by id."""

    entries: list[TokenSequence]

    def __post_init__(self) -> None:
        self._index: dict[str, TokenSequence] = {}
        for seq in self.entries:
            if seq.utt_id in self._index:
                raise ValidationError(f"duplicate utt_id {seq.utt_id!r}")
            self._index[seq.utt_id] = seq

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[TokenSequence]:
        return iter(self.entries)

    def __contains__(self, utt_id: str) -> bool:
        return utt_id in self._index

    def ids(self) -> list[str]:
        return [seq.utt_id for seq in self.entries]

    def get(self, utt_id: str) -> TokenSequence:
        return self._index[utt_id]


def parse_corpus(text: str, cfg: NormConfig = NormConfig(),
                 name: str = "<corpus>") -> Corpus:
    entries: list[TokenSequence] = []
    seen: dict[str, int] = {}
    for ln, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise FormatError(f"{name}:{ln}: missing TAB separator")
        utt_id, raw = line.split("\t", 1)
        if not utt_id:
            raise FormatError(f"{name}:{ln}: empty utt_id")
        if utt_id in seen:
            raise FormatError(
                f"{name}:{ln}: duplicate utt_id {utt_id!r} (first seen line {seen[utt_id]})")
        seen[utt_id] = ln
        entries.append(normalize(tokenize(raw, utt_id), cfg))
    return Corpus(entries)


def load_corpus(path, cfg: NormConfig = NormConfig()) -> Corpus:
    p = Path(path)
    return parse_corpus(p.read_text(encoding="utf-8"), cfg, name=str(p))


def write_corpus(corpus: Corpus) -> str:
    lines = [f"{seq.utt_id}\t{seq.text()}" for seq in corpus]
    return "\n".join(lines) + "\n" if lines else ""


def save_corpus(corpus: Corpus, path) -> None:
    Path(path).write_text(write_corpus(corpus), encoding="utf-8", newline="\n")


@dataclass
class CorpusBundle:
    """The transcript roles plus confidence streams for one evaluation run.

    Any member may be absent; all present members must cover the same
    utterance ids. Confidence streams pair with the system outputs
    (flt_conf with flt_hyp, gec_conf with gec_hyp).
    """

    flt_hyp: Corpus | None = None
    flt_ref: Corpus | None = None
    gec_hyp: Corpus | None = None
    gec_ref: Corpus | None = None
    flt_conf: list[ConfidenceEntry] | None = None
    gec_conf: list[ConfidenceEntry] | None = None

    def members(self) -> dict[str, list[str]]:
        """Present member names mapped to their utterance id lists."""
        out: dict[str, list[str]] = {}
        for name in ("flt_hyp", "flt_ref", "gec_hyp", "gec_ref"):
            corpus = getattr(self, name)
            if corpus is not None:
                out[name] = corpus.ids()
        for name in ("flt_conf", "gec_conf"):
            entries = getattr(self, name)
            if entries is not None:
                out[name] = [e.utt_id for e in entries]
        return out


@dataclass
class BundleReport:
    """Empty lists mean the bundle is consistent."""

    missing: list[tuple[str, str]] = field(default_factory=list)
    mismatches: list[tuple[str, str, str]] = field(default_factory=list)

    def ok(self) -> bool:
        return not self.missing and not self.mismatches

    def lines(self) -> list[str]:
        out = []
        for member, utt_id in self.missing:
            out.append(f"missing: {member} lacks utterance {utt_id!r}")
        for member, utt_id, detail in self.mismatches:
            out.append(f"mismatch: {member} utterance {utt_id!r}: {detail}")
        return out


def validate_bundle(bundle: CorpusBundle, cfg: NormConfig = NormConfig()) -> BundleReport:
    """Report missing utterance ids per member and confidence entries that do
    not reconcile with their transcript. Side-effect free."""
    report = BundleReport()
    members = bundle.members()

    all_ids: dict[str, None] = {}
    for ids in members.values():
        for utt_id in ids:
            all_ids.setdefault(utt_id)
    for name, ids in members.items():
        have = set(ids)
        for utt_id in all_ids:
            if utt_id not in have:
                report.missing.append((name, utt_id))

    for conf_name, corpus in (("flt_conf", bundle.flt_hyp), ("gec_conf", bundle.gec_hyp)):
        entries = getattr(bundle, conf_name)
        if entries is None or corpus is None:
            continue
        for entry in entries:
            if entry.utt_id not in corpus:
                continue  # already reported as missing
            try:
                attach_confidence(corpus.get(entry.utt_id), entry, cfg)
            except ValidationError as exc:
                report.mismatches.append((conf_name, entry.utt_id, str(exc)))
    return report
