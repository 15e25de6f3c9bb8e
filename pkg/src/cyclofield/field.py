"""
Finite fields of odd characteristic.

Elements of F_q (q = p^e) are the integers 0..q-1; the base-p digits of an
element are the coefficients of its representative polynomial in x, lowest
degree first. The modulus is always primitive, so x is the generator g used
for discrete logarithms. All arithmetic is vectorised over numpy arrays.
"""

import logging
from functools import lru_cache
from typing import List, Optional, Sequence, Union

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_pow_mod

from src.core.errors import DegenerateInputError, InvalidInputError
from src.core.models import FieldSpec


MAX_FIELD_ORDER = 10_000
MAX_MODULUS_ATTEMPTS = 20_000

ArrayLike = Union[int, np.integer, np.ndarray, Sequence[int]]

logger = logging.getLogger("klspark.field")


def _is_primitive_modulus(modulus: List[int], p: int) -> bool:
    e = len(modulus) - 1
    poly = [ZZ(c) for c in modulus]
    if e > 1 and not gf_irreducible_p(poly, p, ZZ):
        return False
    order = p ** e - 1
    x = [ZZ(1), ZZ(0)]
    for r in factorint(order):
        if gf_pow_mod(x, order // r, poly, p, ZZ) == [ZZ(1)]:
            return False
    return True


def find_primitive_modulus(p: int, e: int, seed: int = 0) -> List[int]:
    """
    Find a monic primitive polynomial of degree e over F_p.

    The search is a seeded random walk, so the same (p, e, seed) always gives
    the same modulus.

    Args:
        p: Odd prime
        e: Degree
        seed: Search seed

    Returns:
        Coefficients, highest degree first
    """
    rng = np.random.default_rng([seed, p, e])
    for _ in range(MAX_MODULUS_ATTEMPTS):
        tail = [int(c) for c in rng.integers(0, p, size=e)]
        if tail[-1] == 0:
            continue
        modulus = [1] + tail
        if _is_primitive_modulus(modulus, p):
            return modulus
    raise InvalidInputError(f"no primitive modulus of degree {e} over F_{p} found")


class Field:
    """
    The finite field F_q with lookup tables.

    Tables are built once and never mutated, so a Field is safe to share
    between threads.
    """

    def __init__(self, p: int, e: int = 1, modulus: Optional[Sequence[int]] = None, seed: int = 0, base: Optional["Field"] = None):
        """
        Build the field and its tables.

        Args:
            p: Odd prime
            e: Extension degree
            modulus: Monic primitive modulus (high to low); searched when omitted
            seed: Seed for the modulus search, recorded in the spec
            base: Subfield to embed; sets `.embedding` when given

        Raises:
            InvalidInputError: If p is not an odd prime, q is too large or the modulus is unusable
        """
        if p == 2 or not isprime(p):
            raise InvalidInputError(f"p must be an odd prime, got {p}")
        if e < 1:
            raise InvalidInputError(f"extension degree must be >= 1, got {e}")
        q = p ** e
        if q > MAX_FIELD_ORDER:
            raise InvalidInputError(f"fields with q > {MAX_FIELD_ORDER} are not supported (q = {q})")

        self.p = p
        self.e = e
        self.q = q
        self.seed = seed
        self.is_prime = e == 1

        if modulus is None:
            modulus = find_primitive_modulus(p, e, seed)
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != e + 1 or modulus[0] != 1:
            raise InvalidInputError(f"modulus must be monic of degree {e}: {modulus}")
        if not _is_primitive_modulus(modulus, p):
            raise InvalidInputError(f"modulus {modulus} is not primitive over F_{p}")
        self.modulus = modulus

        self.powers = p ** np.arange(e, dtype=np.int64)
        self.digits = (np.arange(q, dtype=np.int64)[:, None] // self.powers[None, :]) % p
        self.exp_table, self.log_table = self._build_log_tables()
        self.neg_table = self._from_digits((-self.digits) % p)
        self.inv_table = np.zeros(q, dtype=np.int64)
        self.inv_table[1:] = self.exp_table[(-self.log_table[1:]) % (q - 1)]
        self.trace_table = self._build_trace_table()
        self.embedding: Optional["FieldEmbedding"] = FieldEmbedding(base, self) if base is not None else None

    def __repr__(self) -> str:
        return f"Field(q={self.q}={self.p}^{self.e}, modulus={self.modulus})"

    @property
    def spec(self) -> FieldSpec:
        return FieldSpec(p=self.p, e=self.e, modulus=list(self.modulus), seed=self.seed)

    @classmethod
    def from_spec(cls, spec: FieldSpec) -> "Field":
        return cls(spec.p, spec.e, spec.modulus, spec.seed)

    def _build_log_tables(self):
        p, e, q = self.p, self.e, self.q
        # x^e = -(m_{e-1} x^{e-1} + ... + m_0)
        reduction = np.array([(-c) % p for c in reversed(self.modulus[1:])], dtype=np.int64)
        exp_table = np.zeros(q - 1, dtype=np.int64)
        log_table = np.zeros(q, dtype=np.int64)
        coeffs = np.zeros(e, dtype=np.int64)
        coeffs[0] = 1
        for k in range(q - 1):
            value = int(coeffs @ self.powers)
            exp_table[k] = value
            log_table[value] = k
            top = coeffs[-1]
            coeffs = np.concatenate(([0], coeffs[:-1]))
            coeffs = (coeffs + top * reduction) % p
        if len(set(exp_table.tolist())) != q - 1:
            raise InvalidInputError(f"modulus {self.modulus} does not generate F_{q}^x")
        return exp_table, log_table

    def _build_trace_table(self) -> np.ndarray:
        p, e, q = self.p, self.e, self.q
        basis_trace = np.zeros(e, dtype=np.int64)
        for j in range(e):
            total = 0
            for k in range(e):
                total = int(self.add(total, self.exp_table[(j * p ** k) % (q - 1)]))
            if total >= p:
                raise InvalidInputError("trace left the prime field; tables are inconsistent")
            basis_trace[j] = total
        return (self.digits @ basis_trace) % p

    def _from_digits(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.powers

    # Element constructors

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def units(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)

    def from_int(self, c: int) -> int:
        """The image of the integer c in the prime subfield."""
        return int(c) % self.p

    def random_elements(self, rng: np.random.Generator, size, nonzero: bool = False) -> np.ndarray:
        low = 1 if nonzero else 0
        return rng.integers(low, self.q, size=size, dtype=np.int64)

    # Arithmetic

    def add(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.is_prime:
            return (a + b) % self.p
        return self._from_digits((self.digits[a] + self.digits[b]) % self.p)

    def neg(self, a: ArrayLike) -> np.ndarray:
        return self.neg_table[np.asarray(a, dtype=np.int64)]

    def sub(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        return self.add(a, self.neg(b))

    def mul(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.is_prime:
            return (a * b) % self.p
        product = self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, product)

    def inv(self, a: ArrayLike) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DegenerateInputError("inversion of zero in F_%d" % self.q)
        return self.inv_table[a]

    def div(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        return self.mul(a, self.inv(b))

    def pow(self, a: ArrayLike, n: int) -> np.ndarray:
        """a^n by square-and-multiply; negative n inverts first."""
        a = np.asarray(a, dtype=np.int64)
        if n < 0:
            a = self.inv(a)
            n = -n
        result = np.ones_like(a)
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def square(self, a: ArrayLike) -> np.ndarray:
        return self.mul(a, a)

    def dlog(self, a: ArrayLike) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DegenerateInputError("discrete logarithm of zero")
        return self.log_table[a]

    def exp(self, k: ArrayLike) -> np.ndarray:
        return self.exp_table[np.asarray(k, dtype=np.int64) % (self.q - 1)]

    def trace(self, a: ArrayLike) -> np.ndarray:
        """Tr_{F_q/F_p}, as integers 0..p-1."""
        return self.trace_table[np.asarray(a, dtype=np.int64)]

    # Reductions

    def sum(self, a: ArrayLike, axis: int = -1) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        axis = axis % a.ndim
        if self.is_prime:
            return a.sum(axis=axis) % self.p
        return self._from_digits(self.digits[a].sum(axis=axis) % self.p)

    def sum_by_index(self, values: np.ndarray, index: np.ndarray, size: int) -> np.ndarray:
        """Field sums of values grouped by integer index into an array of length size."""
        values = np.asarray(values, dtype=np.int64).ravel()
        index = np.asarray(index, dtype=np.int64).ravel()
        acc = np.zeros((size, self.e), dtype=np.int64)
        np.add.at(acc, index, self.digits[values])
        return self._from_digits(acc % self.p)

    def dot(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Row-wise sum of x*y along the last axis."""
        return self.sum(self.mul(x, y), axis=-1)

    def matvec(self, matrix: np.ndarray, vectors: np.ndarray) -> np.ndarray:
        """
        Apply a small matrix to many vectors.

        Args:
            matrix: (r, k) array of elements
            vectors: (N, k) array of elements

        Returns:
            (N, r) array whose rows are matrix @ vector
        """
        matrix = np.asarray(matrix, dtype=np.int64)
        vectors = np.asarray(vectors, dtype=np.int64)
        if self.is_prime:
            return (vectors @ matrix.T) % self.p
        out = np.zeros((vectors.shape[0], matrix.shape[0]), dtype=np.int64)
        for i in range(matrix.shape[0]):
            acc = np.zeros(vectors.shape[0], dtype=np.int64)
            for j in np.nonzero(matrix[i])[0]:
                coeff = int(matrix[i, j])
                term = vectors[:, j] if coeff == 1 else self.mul(vectors[:, j], coeff)
                acc = self.add(acc, term)
            out[:, i] = acc
        return out

    def bilinear(self, x: np.ndarray, gram: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Row-wise x^T G y for (N, a) x, (a, b) G and (N, b) y."""
        return self.dot(x, self.matvec(gram, y))


def field_arithmetic(field: Field, x: ArrayLike, y: Optional[ArrayLike], op: str) -> np.ndarray:
    """
    Dispatch one of add, sub, mul, div, inv, neg, pow.

    For pow, y is the integer exponent.

    Raises:
        DegenerateInputError: On inversion of zero
        InvalidInputError: On an unknown op
    """
    if op == "add":
        return field.add(x, y)
    if op == "sub":
        return field.sub(x, y)
    if op == "mul":
        return field.mul(x, y)
    if op == "div":
        return field.div(x, y)
    if op == "inv":
        return field.inv(x)
    if op == "neg":
        return field.neg(x)
    if op == "pow":
        return field.pow(x, int(y))
    raise InvalidInputError(f"unknown field operation: {op}")


class FieldEmbedding:
    """The inclusion F_q -> F_Q of a base field into an extension of degree k."""

    def __init__(self, base: Field, extension: Field):
        if extension.p != base.p or extension.e % base.e != 0:
            raise InvalidInputError(f"{extension} does not contain {base}")
        self.base = base
        self.extension = extension
        self.degree = extension.e // base.e

        rho = self._find_root()
        rho_powers = np.array([int(extension.pow(rho, j)) for j in range(base.e)], dtype=np.int64)
        image = np.zeros(base.q, dtype=np.int64)
        for j in range(base.e):
            image = extension.add(image, extension.mul(base.digits[:, j], rho_powers[j]))
        self.embed_table = image
        self.restrict_table = np.full(extension.q, -1, dtype=np.int64)
        self.restrict_table[image] = np.arange(base.q, dtype=np.int64)

        # embed(g) = G^(j (Q-1)/(q-1)) with gcd(j, q-1) = 1
        cofactor = (extension.q - 1) // (base.q - 1)
        log_rho = int(extension.log_table[rho])
        self.generator_index = (log_rho // cofactor) % (base.q - 1)
        self.generator_index_inv = pow(self.generator_index, -1, base.q - 1)

    def _find_root(self) -> int:
        ext = self.extension
        values = np.zeros(ext.q, dtype=np.int64)
        candidates = ext.elements()
        for c in self.base.modulus:
            values = ext.add(ext.mul(values, candidates), c)
        roots = np.nonzero(values == 0)[0]
        if len(roots) == 0:
            raise InvalidInputError(f"base modulus {self.base.modulus} has no root in {ext}")
        return int(roots[0])

    def embed(self, a: ArrayLike) -> np.ndarray:
        return self.embed_table[np.asarray(a, dtype=np.int64)]

    def restrict(self, a: ArrayLike) -> np.ndarray:
        """Inverse of embed; raises if an element lies outside the base field."""
        out = self.restrict_table[np.asarray(a, dtype=np.int64)]
        if np.any(out < 0):
            raise InvalidInputError("element is not in the base field")
        return out

    def relative_trace(self, a: ArrayLike) -> np.ndarray:
        """Tr_{F_Q/F_q}, returned as base field elements."""
        ext = self.extension
        a = np.asarray(a, dtype=np.int64)
        total = np.zeros_like(a)
        for i in range(self.degree):
            total = ext.add(total, ext.pow(a, self.base.q ** i))
        return self.restrict(total)

    def relative_norm(self, a: ArrayLike) -> np.ndarray:
        """N_{F_Q/F_q}, returned as base field elements."""
        ext = self.extension
        return self.restrict(ext.pow(a, (ext.q - 1) // (self.base.q - 1)))

    def lift_exponent(self, r: int) -> int:
        """Exponent R with chi_R(y) = chi_r(N(y)) for y in F_Q^x."""
        cofactor = (self.extension.q - 1) // (self.base.q - 1)
        return (r * self.generator_index_inv * cofactor) % (self.extension.q - 1)


@lru_cache(maxsize=64)
def _cached_field(p: int, e: int, modulus: Optional[tuple], seed: int) -> Field:
    return Field(p, e, list(modulus) if modulus else None, seed)


def get_field(p: int, e: int = 1, modulus: Optional[Sequence[int]] = None, seed: int = 0) -> Field:
    """Shared, cached Field construction."""
    return _cached_field(p, e, tuple(modulus) if modulus else None, seed)


def field_from_order(q: int, seed: int = 0) -> Field:
    """
    Build F_q from its order.

    Raises:
        InvalidInputError: If q is not a power of an odd prime
    """
    factors = factorint(q)
    if len(factors) != 1:
        raise InvalidInputError(f"q must be a prime power, got {q}")
    (p, e), = factors.items()
    return get_field(int(p), int(e), seed=seed)


def extend_field(base: Field, k: int) -> Field:
    """
    The degree-k extension of base, with its embedding attached as `.embedding`.

    The extension modulus comes from the seeded search with the base field's
    seed, so the result is reproducible from (base spec, k).

    Raises:
        InvalidInputError: If k < 1 or the extension is too large
    """
    if k < 1:
        raise InvalidInputError(f"extension degree must be >= 1, got {k}")
    if k == 1:
        extension = Field(base.p, base.e, base.modulus, base.seed, base=base)
    else:
        extension = Field(base.p, base.e * k, seed=base.seed, base=base)
    logger.debug(f"Extended F_{base.q} to F_{extension.q} with modulus {extension.modulus}")
    return extension
