"""
Additive and multiplicative characters of a finite field.
"""

from typing import Optional

import numpy as np

from src.core.errors import InvalidInputError
from src.cyclofield.field import ArrayLike, Field


class AdditiveCharacter:
    """psi_a(x) = zeta_p^Tr(a x), a nonzero."""

    def __init__(self, field: Field, multiplier: int = 1):
        multiplier = int(multiplier)
        if not 0 < multiplier < field.q:
            raise InvalidInputError(f"additive character multiplier must be a nonzero element, got {multiplier}")
        self.field = field
        self.multiplier = multiplier

    def __repr__(self) -> str:
        return f"AdditiveCharacter(q={self.field.q}, multiplier={self.multiplier})"

    def trace_of(self, x: ArrayLike) -> np.ndarray:
        """Exponents Tr(a x) in 0..p-1."""
        return self.field.trace(self.field.mul(x, self.multiplier))

    def __call__(self, x: ArrayLike) -> np.ndarray:
        return np.exp(2j * np.pi * self.trace_of(x) / self.field.p)

    def lift(self, extension: Field) -> "AdditiveCharacter":
        """psi composed with the relative trace of an extension."""
        embedding = extension.embedding
        if embedding is None or embedding.base.q != self.field.q:
            raise InvalidInputError("extension does not carry an embedding of this field")
        return AdditiveCharacter(extension, int(embedding.embed(self.multiplier)))


class MultiplicativeCharacter:
    """chi_r(x) = zeta_{q-1}^(r dlog x), chi_r(0) = 0."""

    def __init__(self, field: Field, exponent: int = 0):
        self.field = field
        self.exponent = int(exponent) % (field.q - 1)

    def __repr__(self) -> str:
        return f"MultiplicativeCharacter(q={self.field.q}, exponent={self.exponent})"

    @classmethod
    def trivial(cls, field: Field) -> "MultiplicativeCharacter":
        return cls(field, 0)

    @classmethod
    def quadratic(cls, field: Field) -> "MultiplicativeCharacter":
        return cls(field, (field.q - 1) // 2)

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0

    @property
    def is_quadratic(self) -> bool:
        return self.exponent == (self.field.q - 1) // 2

    @property
    def is_exact(self) -> bool:
        return self.is_trivial or self.is_quadratic

    @property
    def order(self) -> int:
        n = self.field.q - 1
        return n // np.gcd(n, self.exponent) if self.exponent else 1

    def __call__(self, x: ArrayLike) -> np.ndarray:
        """
        Values on an array of elements.

        Exact characters give int64 values in {0, 1, -1}; others give complex128.
        """
        x = np.asarray(x, dtype=np.int64)
        nonzero = x != 0
        logs = self.field.log_table[x]
        if self.is_trivial:
            return nonzero.astype(np.int64)
        if self.is_quadratic:
            return np.where(nonzero, 1 - 2 * (logs % 2), 0).astype(np.int64)
        phase = np.exp(2j * np.pi * ((self.exponent * logs) % (self.field.q - 1)) / (self.field.q - 1))
        return np.where(nonzero, phase, 0)

    def lift(self, extension: Field) -> "MultiplicativeCharacter":
        """chi composed with the relative norm of an extension."""
        embedding = extension.embedding
        if embedding is None or embedding.base.q != self.field.q:
            raise InvalidInputError("extension does not carry an embedding of this field")
        return MultiplicativeCharacter(extension, embedding.lift_exponent(self.exponent))


def quadratic_character(field: Field, x: ArrayLike) -> np.ndarray:
    """eta(x) in {0, 1, -1}."""
    return MultiplicativeCharacter.quadratic(field)(x)


def is_square(field: Field, x: int) -> bool:
    return int(quadratic_character(field, x)) == 1 or int(x) == 0


def sqrt_or_none(field: Field, x: int) -> Optional[int]:
    """A square root of x, or None when x is a non-square."""
    x = int(x)
    if x == 0:
        return 0
    k = int(field.log_table[x])
    if k % 2:
        return None
    return int(field.exp_table[k // 2])
