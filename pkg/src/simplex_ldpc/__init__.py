"""Rate-adaptive punctured binary simplex codes treated as LDPC codes."""

from simplex_ldpc.errors import InvalidInputError, InvariantViolation, ResourceLimitError
from simplex_ldpc.gf2 import BinaryPolynomial, parse_polynomial

__version__ = "0.1.0"

__all__ = [
    "BinaryPolynomial",
    "parse_polynomial",
    "InvalidInputError",
    "InvariantViolation",
    "ResourceLimitError",
]
