"""Tokenization and normalization for speech transcripts.

Hypothesis, reference, and confidence-file tokens must all pass through the
same :class:`NormConfig` before any alignment; otherwise casing or
punctuation mismatches surface downstream as phantom edits.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

# Stripped from token edges only. Internal hyphens and apostrophes carry
# lexical content in spoken transcripts and are preserved.
PUNCT_CHARS = '.,;:!?"()'

RIGHT_SINGLE_QUOTE = "’"


@dataclass(frozen=True)
class NormConfig:
    """Normalization switches; defaults match spoken-transcript conventions."""

    lowercase: bool = True
    strip_punct: bool = True
    unify_apostrophes: bool = True


@dataclass
class TokenSequence:
    """Ordered words of one utterance."""

    utt_id: str
    tokens: list[str]

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)

    def __getitem__(self, index):
        return self.tokens[index]

    def text(self) -> str:
        return " ".join(self.tokens)


def tokenize(text: str, utt_id: str = "") -> TokenSequence:
    """Split on Unicode whitespace; runs of whitespace collapse."""
    return TokenSequence(utt_id, text.split())


def detokenize(seq: TokenSequence) -> str:
    return seq.text()


def normalize_token(token: str, cfg: NormConfig = NormConfig()) -> str:
    """Normalize a single token. May return "" (callers drop such tokens)."""
    if cfg.unify_apostrophes:
        token = token.replace(RIGHT_SINGLE_QUOTE, "'")
    if cfg.lowercase:
        token = token.lower()
    if cfg.strip_punct:
        token = token.strip(PUNCT_CHARS)
    return token


def normalize(seq: TokenSequence, cfg: NormConfig = NormConfig()) -> TokenSequence:
    """Normalize every token, dropping the ones that reduce to "".

    Idempotent: a second application is a no-op. Tokens are never split,
    so the output is never longer than the input.
    """
    out = []
    for tok in seq.tokens:
        norm = normalize_token(tok, cfg)
        if norm:
            out.append(norm)
    return TokenSequence(seq.utt_id, out)


def normalize_text(text: str, cfg: NormConfig = NormConfig(), utt_id: str = "") -> TokenSequence:
    return normalize(tokenize(text, utt_id), cfg)
