"""Sparse integer sequences, eventual indiscernibility, and unary graph coding."""

from .errors import (
    ExtractionError,
    FalsificationError,
    NoThresholdError,
    PatternUnstableError,
    VaporlabError,
)
from .sequences import SparseSequence, explicit, factorials, floor_pi_powers

__version__ = "0.1.0"

__all__ = [
    "ExtractionError",
    "FalsificationError",
    "NoThresholdError",
    "PatternUnstableError",
    "VaporlabError",
    "SparseSequence",
    "explicit",
    "factorials",
    "floor_pi_powers",
]
