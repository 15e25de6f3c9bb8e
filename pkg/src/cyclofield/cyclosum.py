"""
Exact elements of Z[zeta_p] and character-sum accumulation.

A CycloSum stores the integer coefficients of 1, zeta, ..., zeta^(p-1) in
canonical form: the last coefficient is eliminated with
1 + zeta + ... + zeta^(p-1) = 0, so equality is coefficient equality.
"""

from typing import Iterable, Optional, Tuple, Union

import numpy as np

from src.core.errors import BackendMismatchError, InvalidInputError
from src.core.models import Backend


class CycloSum:
    """An element of Z[zeta_p] in canonical form."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Optional[Iterable[int]] = None):
        self.p = p
        if coeffs is None:
            values = np.zeros(p, dtype=np.int64)
        else:
            values = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=np.int64)
            if values.shape != (p,):
                raise InvalidInputError(f"CycloSum over p={p} needs {p} coefficients, got {values.shape}")
        self.coeffs = values - values[p - 1]

    @classmethod
    def zero(cls, p: int) -> "CycloSum":
        return cls(p)

    @classmethod
    def integer(cls, p: int, value: int) -> "CycloSum":
        coeffs = np.zeros(p, dtype=np.int64)
        coeffs[0] = value
        return cls(p, coeffs)

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "CycloSum":
        coeffs = np.zeros(p, dtype=np.int64)
        coeffs[k % p] = 1
        return cls(p, coeffs)

    def _coerce(self, other: Union["CycloSum", int]) -> "CycloSum":
        if isinstance(other, CycloSum):
            if other.p != self.p:
                raise InvalidInputError(f"cannot combine Z[zeta_{self.p}] with Z[zeta_{other.p}]")
            return other
        if isinstance(other, (int, np.integer)):
            return CycloSum.integer(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloSum(self.p, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self) -> "CycloSum":
        return CycloSum(self.p, -self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloSum(self.p, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CycloSum(self.p, self.coeffs * int(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        full = np.convolve(self.coeffs, other.coeffs)
        folded = np.zeros(self.p, dtype=np.int64)
        np.add.at(folded, np.arange(full.size) % self.p, full)
        return CycloSum(self.p, folded)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            other = CycloSum.integer(self.p, int(other))
        if not isinstance(other, CycloSum):
            return NotImplemented
        return self.p == other.p and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.p, tuple(self.coeffs.tolist())))

    def __repr__(self) -> str:
        return f"CycloSum(p={self.p}, coeffs={self.coeffs.tolist()})"

    def to_complex(self) -> complex:
        zeta = np.exp(2j * np.pi * np.arange(self.p) / self.p)
        return complex(np.dot(self.coeffs.astype(np.float64), zeta))

    def __abs__(self) -> float:
        return abs(self.to_complex())

    def is_integer(self) -> bool:
        return not np.any(self.coeffs[1:])

    def as_integer(self) -> int:
        if not self.is_integer():
            raise InvalidInputError(f"{self} is not a rational integer")
        return int(self.coeffs[0])

    def to_list(self):
        return [int(c) for c in self.coeffs]


def _is_exact_weights(values: np.ndarray) -> bool:
    return np.issubdtype(values.dtype, np.integer) or values.dtype == np.bool_


class CharSumAccumulator:
    """
    Accumulates sums of chi-value * psi(argument).

    The backend is fixed by the first batch: integer chi values select the
    exact backend, complex values the floating one.
    """

    def __init__(self, field, psi, backend: Optional[Backend] = None):
        self.field = field
        self.psi = psi
        self.backend = backend
        self.count = 0
        self._exact = np.zeros(field.p, dtype=np.int64)
        self._float = np.zeros(field.p, dtype=np.complex128)

    def _check_backend(self, backend: Backend) -> None:
        if self.backend is None:
            self.backend = backend
        elif self.backend != backend:
            raise BackendMismatchError(
                f"cannot add {backend.value} values to a {self.backend.value} accumulation"
            )

    def add_traces(self, weights: np.ndarray, traces: np.ndarray) -> None:
        """Add weights at precomputed additive-character exponents in 0..p-1."""
        weights = np.asarray(weights)
        traces = np.asarray(traces, dtype=np.int64).ravel()
        weights = weights.ravel()
        p = self.field.p
        self.count += traces.size
        if _is_exact_weights(weights):
            self._check_backend(Backend.EXACT)
            weights = weights.astype(np.int64)
            if weights.size and np.abs(weights).max() <= 1:
                self._exact += np.bincount(traces[weights == 1], minlength=p)
                self._exact -= np.bincount(traces[weights == -1], minlength=p)
            else:
                np.add.at(self._exact, traces, weights)
        else:
            self._check_backend(Backend.FLOAT)
            weights = weights.astype(np.complex128)
            self._float += np.bincount(traces, weights=weights.real, minlength=p)
            self._float += 1j * np.bincount(traces, weights=weights.imag, minlength=p)

    def add(self, chi_values: np.ndarray, arguments: np.ndarray) -> None:
        """Add chi_values[i] * psi(arguments[i])."""
        self.add_traces(chi_values, self.psi.trace_of(arguments))

    def merge(self, other: "CharSumAccumulator") -> None:
        if other.backend is None:
            return
        self._check_backend(other.backend)
        self._exact += other._exact
        self._float += other._float
        self.count += other.count

    def result(self) -> Union[CycloSum, complex]:
        if self.backend == Backend.FLOAT:
            zeta = np.exp(2j * np.pi * np.arange(self.field.p) / self.field.p)
            return complex(np.dot(self._float, zeta))
        return CycloSum(self.field.p, self._exact)


def char_sum_accumulate(
    terms: Iterable[Tuple[Union[int, complex], int]], field, psi
) -> Union[CycloSum, complex]:
    """
    Sum chi * psi(x) over a stream of (chi-value, x) pairs.

    Raises:
        BackendMismatchError: If exact and complex chi values are mixed
    """
    accumulator = CharSumAccumulator(field, psi)
    for chi_value, argument in terms:
        if isinstance(chi_value, (complex, float, np.complexfloating, np.floating)):
            weights = np.array([chi_value], dtype=np.complex128)
        else:
            weights = np.array([int(chi_value)], dtype=np.int64)
        accumulator.add(weights, np.array([argument], dtype=np.int64))
    return accumulator.result()
