"""
Univariate polynomials over F_q.

Dense coefficient lists, highest degree first (the galoistools convention).
Root finding is exhaustive evaluation, which is fine at desk scale.
"""

from typing import Dict, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field as PydanticField

from src.core.errors import DegenerateInputError
from src.cyclofield.field import Field


class Poly:
    """A polynomial over a Field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence[int]):
        self.field = field
        coeffs = [int(c) for c in coeffs]
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        self.coeffs: List[int] = coeffs[start:]

    @classmethod
    def from_roots(cls, field: Field, roots: Sequence[int]) -> "Poly":
        poly = cls(field, [1])
        for r in roots:
            poly = poly * cls(field, [1, int(field.neg(r))])
        return poly

    @classmethod
    def constant(cls, field: Field, c: int) -> "Poly":
        return cls(field, [c])

    @classmethod
    def x(cls, field: Field) -> "Poly":
        return cls(field, [1, 0])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __repr__(self) -> str:
        return f"Poly({self.coeffs} over F_{self.field.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.field.q == other.field.q and self.coeffs == other.coeffs

    def _padded(self, length: int) -> np.ndarray:
        return np.array([0] * (length - len(self.coeffs)) + self.coeffs, dtype=np.int64)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, self.field.add(self._padded(n), other._padded(n)))

    def __neg__(self) -> "Poly":
        return Poly(self.field, self.field.neg(np.array(self.coeffs, dtype=np.int64)))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly(self.field, [])
        a = np.array(self.coeffs, dtype=np.int64)
        b = np.array(other.coeffs, dtype=np.int64)
        products = self.field.mul(a[:, None], b[None, :])
        index = np.add.outer(np.arange(a.size), np.arange(b.size))
        return Poly(self.field, self.field.sum_by_index(products, index, a.size + b.size - 1))

    def scale(self, c: int) -> "Poly":
        return Poly(self.field, self.field.mul(np.array(self.coeffs, dtype=np.int64), c))

    def monic(self) -> "Poly":
        if self.is_zero():
            raise DegenerateInputError("the zero polynomial has no monic associate")
        return self.scale(int(self.field.inv(self.leading())))

    def divmod(self, divisor: "Poly") -> Tuple["Poly", "Poly"]:
        if divisor.is_zero():
            raise DegenerateInputError("polynomial division by zero")
        field = self.field
        remainder = np.array(self.coeffs, dtype=np.int64)
        quotient = np.zeros(max(self.degree - divisor.degree + 1, 0), dtype=np.int64)
        d = np.array(divisor.coeffs, dtype=np.int64)
        lead_inv = int(field.inv(divisor.leading()))
        for i in range(quotient.size):
            c = int(field.mul(remainder[i], lead_inv))
            quotient[i] = c
            if c:
                remainder[i:i + d.size] = field.sub(remainder[i:i + d.size], field.mul(d, c))
        rest = remainder[quotient.size:] if quotient.size else remainder
        return Poly(field, quotient), Poly(field, rest)

    def exact_div(self, divisor: "Poly") -> "Poly":
        quotient, remainder = self.divmod(divisor)
        if not remainder.is_zero():
            raise DegenerateInputError(f"{divisor} does not divide {self}")
        return quotient

    def __mod__(self, divisor: "Poly") -> "Poly":
        return self.divmod(divisor)[1]

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self) -> "Poly":
        n = self.degree
        if n <= 0:
            return Poly(self.field, [])
        exponents = np.arange(n, 0, -1) % self.field.p
        return Poly(self.field, self.field.mul(np.array(self.coeffs[:-1], dtype=np.int64), exponents))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        value = np.zeros_like(x)
        for c in self.coeffs:
            value = self.field.add(self.field.mul(value, x), c)
        return value

    def is_squarefree(self) -> bool:
        """Squarefree over the algebraic closure: gcd(f, f') is a nonzero constant."""
        if self.is_zero():
            raise DegenerateInputError("the zero polynomial has no squarefree part")
        if self.degree <= 0:
            return True
        derivative = self.derivative()
        if derivative.is_zero():
            return False
        return self.gcd(derivative).degree == 0

    def rational_roots(self) -> Dict[int, int]:
        """Roots in F_q with their multiplicities."""
        if self.is_zero():
            raise DegenerateInputError("the zero polynomial has every element as a root")
        roots = np.nonzero(self(self.field.elements()) == 0)[0]
        result: Dict[int, int] = {}
        for r in roots:
            r = int(r)
            linear = Poly(self.field, [1, int(self.field.neg(r))])
            f, multiplicity = self, 0
            while True:
                quotient, remainder = f.divmod(linear)
                if not remainder.is_zero():
                    break
                f, multiplicity = quotient, multiplicity + 1
            result[r] = multiplicity
        return result


class PolyRoots(BaseModel):
    """Rational roots of a polynomial and its squarefree flag over the closure."""
    roots: Dict[int, int] = PydanticField(default_factory=dict, description="Root -> multiplicity in F_q")
    squarefree: bool = PydanticField(..., description="gcd(f, f') is constant")
    degree: int = PydanticField(..., description="Degree of f")

    @property
    def multiset(self) -> List[int]:
        return sorted(r for r, k in self.roots.items() for _ in range(k))


def poly_roots(f: Poly) -> PolyRoots:
    """
    Roots of f in F_q with multiplicity, plus the squarefree flag.

    Raises:
        DegenerateInputError: If f is the zero polynomial
    """
    return PolyRoots(roots=f.rational_roots(), squarefree=f.is_squarefree(), degree=f.degree)
