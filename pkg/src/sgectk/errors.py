"""Exception types, split by where the problem lives.

FormatError     -> a single file is malformed (syntax, bad fields); carries
                   a line number whenever one is known.
StructuralError -> an in-memory object violates its own invariants
                   (overlapping spans, out-of-range indices, kind mismatch).
ValidationError -> files disagree with each other (utterance id sets,
                   confidence/transcript reconciliation).

The CLI maps these onto distinct exit codes.
"""


class FormatError(Exception):
    pass


class StructuralError(Exception):
    pass


class ValidationError(Exception):
    pass
