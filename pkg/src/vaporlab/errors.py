"""Exception types shared across vaporlab."""

from __future__ import annotations


class VaporlabError(ValueError):
    """Base class for domain errors (bad input, missing certificates)."""


class NoThresholdError(VaporlabError):
    """A growth or residue threshold does not exist inside the truncation."""


class FalsificationError(VaporlabError):
    """A proven bound was violated by explicit computation.

    Raised loudly: this means either a bug or a false mathematical claim.
    """


class PatternUnstableError(VaporlabError):
    """Two tuples realizing the same equality pattern disagree on a formula."""

    def __init__(self, message: str, pattern, witness_true, witness_false):
        super().__init__(message)
        self.pattern = pattern
        self.witness_true = witness_true
        self.witness_false = witness_false


class ExtractionError(VaporlabError):
    """No eventually indiscernible tail of the requested length was found."""
