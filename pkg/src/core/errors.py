"""
Error types for KlSpark.

Every error carries the process exit code the CLI reports for it:
0 pass, 1 verification failure, 2 invalid input, 3 inapplicable.
"""

from typing import Optional


class KlSparkError(Exception):
    """Base class for all KlSpark errors."""

    exit_code: int = 1

    def __init__(self, message: str, rule: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.rule = rule

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": self.message, "rule": self.rule}


class ClassificationError(KlSparkError):
    """(type, n, m, d) does not name an admissible parahoric."""

    exit_code = 2


class InvalidInputError(KlSparkError):
    """Malformed φ, χ or field specification, or a shape mismatch."""

    exit_code = 2


class DegenerateInputError(KlSparkError):
    """Inversion of zero, a degenerate form where a nondegenerate one is required, or a zero polynomial."""

    exit_code = 2


class BackendMismatchError(KlSparkError):
    """Exact and floating character values were mixed in one accumulation."""

    exit_code = 2


class ArityError(KlSparkError):
    """The character components do not match the arity of f′."""

    exit_code = 2


class InapplicableError(KlSparkError):
    """The requested test does not apply to this configuration."""

    exit_code = 3


class InvariantViolation(KlSparkError):
    """An internal invariant failed, e.g. a zero denominator on a filtered domain point."""

    exit_code = 1


class BudgetExceeded(KlSparkError):
    """An enumeration would exceed the configured point budget."""

    exit_code = 1
