"""
Summation domains and the functions f_phi = x*g + h and f' on them.

Each family enumerates its domain in chunks of normalized representatives,
caches the block values the formulas need and evaluates g, h and the f'
entries on whole chunks at once. f' is returned as field elements; the
constant sign entry is -1.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, Iterator, List, Optional

import numpy as np

from src.core.errors import InvalidInputError, InvariantViolation
from src.quadform.models import GroupDatum, StableFunctional
from src.quadform.projective import affine_points, projective_points
from src.quadform.space import GradedQuadraticSpace
from src.quadform.stability import validate_shapes
from src.sum_engine.models import DomainPoint


logger = logging.getLogger("klspark.engine")


@dataclass
class DomainChunk:
    """Points of the domain as arrays; scalars are the c of symplectic tensors."""
    vectors: np.ndarray
    scalars: Optional[np.ndarray] = None
    cache: Dict[str, np.ndarray] = dataclass_field(default_factory=dict)

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def points(self) -> List[DomainPoint]:
        out = []
        for k in range(len(self)):
            out.append(DomainPoint(
                vector=self.vectors[k].tolist(),
                scalar=None if self.scalars is None else int(self.scalars[k]),
                cache={name: values[k].tolist() for name, values in self.cache.items()},
            ))
        return out

    @classmethod
    def from_points(cls, points: List[DomainPoint], dim: int) -> "DomainChunk":
        vectors = np.array([p.vector for p in points], dtype=np.int64).reshape(len(points), dim)
        scalars = None
        if points and points[0].scalar is not None:
            scalars = np.array([p.scalar for p in points], dtype=np.int64)
        return cls(vectors=vectors, scalars=scalars)


@dataclass
class Evaluation:
    """f_phi(x, v) = x*g + h and f'(v) on a chunk."""
    g: np.ndarray
    h: np.ndarray
    f_prime: np.ndarray

    def __len__(self) -> int:
        return self.g.shape[0]


class SumFamily:
    """Base class; subclasses implement `_raw_chunks`, `_fill_cache`, `_mask` and `evaluate`."""

    def __init__(self, datum: GroupDatum, space: GradedQuadraticSpace, phi: Optional[StableFunctional] = None):
        self.datum = datum
        self.space = space
        self.field = space.field
        self.logger = logger
        self.maps: List[np.ndarray] = []
        self.forms: List[np.ndarray] = []
        if phi is not None:
            self.maps, self.forms = validate_shapes(datum, phi)
        self.phi = phi

    @property
    def arity(self) -> int:
        return self.datum.chi_arity

    def _raw_chunks(self, chunk_size: int) -> Iterator[DomainChunk]:
        raise NotImplementedError

    def _fill_cache(self, chunk: DomainChunk) -> None:
        raise NotImplementedError

    def _mask(self, chunk: DomainChunk) -> np.ndarray:
        raise NotImplementedError

    def evaluate(self, chunk: DomainChunk) -> Evaluation:
        raise NotImplementedError

    def chunks(self, chunk_size: int = 1 << 16) -> Iterator[DomainChunk]:
        """Filtered domain chunks with caches filled."""
        for chunk in self._raw_chunks(chunk_size):
            self._fill_cache(chunk)
            keep = self._mask(chunk)
            if not keep.all():
                chunk = DomainChunk(
                    vectors=chunk.vectors[keep],
                    scalars=None if chunk.scalars is None else chunk.scalars[keep],
                    cache={k: v[keep] for k, v in chunk.cache.items()},
                )
            if len(chunk):
                yield chunk

    def prepare(self, chunk: DomainChunk) -> DomainChunk:
        """Fill the cache of a hand-built chunk."""
        if not chunk.cache:
            self._fill_cache(chunk)
        return chunk

    def _require_phi(self) -> None:
        if self.phi is None:
            raise InvalidInputError("evaluation needs a functional phi")

    def _safe_inv(self, values: np.ndarray, what: str) -> np.ndarray:
        if np.any(values == 0):
            raise InvariantViolation(f"zero denominator {what} on a domain point")
        return self.field.inv(values)

    def _col(self, vectors: np.ndarray, label: int) -> np.ndarray:
        return self.space.coords(vectors, label)


class UnitaryFamily(SumFamily):
    """
    P(M) minus the quadrics q_[-i,i] = 0, i = 0..l.

    cache["q"][:, i] holds q_[-i,i](v); the last column is q(v).
    """

    def _raw_chunks(self, chunk_size):
        for vectors in projective_points(self.field, self.space.dim, chunk_size):
            yield DomainChunk(vectors=vectors)

    def _fill_cache(self, chunk):
        f, space = self.field, self.space
        v = chunk.vectors
        ell = self.datum.ell
        q = np.zeros((len(chunk), ell + 1), dtype=np.int64)
        q[:, 0] = space.quadratic(v, [0])
        for i in range(1, ell + 1):
            cross = space.pairing(self._col(v, i), i, self._col(v, -i), -i)
            q[:, i] = f.add(q[:, i - 1], cross)
        chunk.cache["q"] = q

    def _mask(self, chunk):
        return np.all(chunk.cache["q"] != 0, axis=1)

    def evaluate(self, chunk):
        self._require_phi()
        f, space = self.field, self.space
        v = chunk.vectors
        ell = self.datum.ell
        q = chunk.cache["q"]
        inv_q = self._safe_inv(q, "q_[-i,i]")
        h = np.zeros(len(chunk), dtype=np.int64)
        for i in range(ell):
            image = f.matvec(self.maps[i], self._col(v, i))
            term = f.bilinear(image, space.block(i + 1, -i - 1), self._col(v, -i - 1))
            h = f.add(h, f.mul(term, inv_q[:, i]))
        top = f.mul(f.bilinear(self._col(v, ell), self.forms[0], self._col(v, ell)), space.inv2)
        g = f.mul(top, inv_q[:, ell])
        f_prime = np.empty((len(chunk), ell + 1), dtype=np.int64)
        f_prime[:, 0] = f.neg(1)
        for i in range(1, ell + 1):
            f_prime[:, i] = f.mul(q[:, i - 1], inv_q[:, i])
        return Evaluation(g=g, h=h, f_prime=f_prime)


class OrthogonalFamily(SumFamily):
    """
    Points of the quadric q = 0 off the quadrics q_[i,m-i] = 0, i = 1..l.

    cache["q"][:, i-1] holds q_[i,m-i](v).
    """

    def _raw_chunks(self, chunk_size):
        for vectors in projective_points(self.field, self.space.dim, chunk_size):
            yield DomainChunk(vectors=vectors)

    def _fill_cache(self, chunk):
        f, space = self.field, self.space
        v = chunk.vectors
        m, ell = self.datum.m, self.datum.ell
        q = np.zeros((len(chunk), ell), dtype=np.int64)
        q[:, ell - 1] = space.quadratic(v, [ell])
        for i in range(ell - 1, 0, -1):
            cross = space.pairing(self._col(v, i), i, self._col(v, m - i), m - i)
            q[:, i - 1] = f.add(q[:, i], cross)
        chunk.cache["q"] = q
        chunk.cache["q_total"] = f.add(q[:, 0], space.quadratic(v, [0]))

    def _mask(self, chunk):
        return (chunk.cache["q_total"] == 0) & np.all(chunk.cache["q"] != 0, axis=1)

    def evaluate(self, chunk):
        self._require_phi()
        f, space = self.field, self.space
        v = chunk.vectors
        m, ell = self.datum.m, self.datum.ell
        q = chunk.cache["q"]
        if np.any(chunk.cache["q_total"] != 0):
            raise InvariantViolation("orthogonal domain point off the quadric q = 0")
        inv_q = self._safe_inv(q, "q_[i,m-i]")

        def term(i: int) -> np.ndarray:
            image = f.matvec(self.maps[i], self._col(v, i))
            return f.bilinear(image, space.block(i + 1, m - i - 1), self._col(v, m - i - 1))

        g = f.neg(f.mul(term(0), inv_q[:, 0]))
        h = np.zeros(len(chunk), dtype=np.int64)
        for i in range(1, ell):
            h = f.sub(h, f.mul(term(i), inv_q[:, i]))
        f_prime = np.empty((len(chunk), ell), dtype=np.int64)
        f_prime[:, 0] = f.neg(1)
        for i in range(1, ell):
            f_prime[:, i] = f.mul(q[:, i - 1], inv_q[:, i])
        return Evaluation(g=g, h=h, f_prime=f_prime)


class SymplecticFamily(SumFamily):
    """
    Symmetric tensors u.v of rank <= 1 with 1 - gamma_1 - ... - gamma_i != 0.

    The zero tensor comes first (scalar 0), then c.w(x)w for c in F_q^x and
    normalized w. cache["gamma"][:, i-1] holds gamma_i for i = 1..m.
    """

    def _raw_chunks(self, chunk_size):
        f = self.field
        dim = self.space.dim
        yield DomainChunk(vectors=np.zeros((1, dim), dtype=np.int64), scalars=np.zeros(1, dtype=np.int64))
        units = f.units()
        per_chunk = max(1, chunk_size // units.size)
        for w in projective_points(f, dim, per_chunk):
            yield DomainChunk(
                vectors=np.repeat(w, units.size, axis=0),
                scalars=np.tile(units, w.shape[0]),
            )

    def _fill_cache(self, chunk):
        f, space = self.field, self.space
        w, c = chunk.vectors, chunk.scalars
        m = self.datum.m
        gamma = np.zeros((len(chunk), m), dtype=np.int64)
        for i in range(1, m + 1):
            j = m + 1 - i
            gamma[:, i - 1] = f.mul(c, space.pairing(self._col(w, j), j, self._col(w, i), i))
        chunk.cache["gamma"] = gamma
        ell = self.datum.ell
        denominators = np.ones((len(chunk), ell + 1), dtype=np.int64)
        for i in range(1, ell + 1):
            denominators[:, i] = f.sub(denominators[:, i - 1], gamma[:, i - 1])
        chunk.cache["d"] = denominators

    def _mask(self, chunk):
        return np.all(chunk.cache["d"][:, 1:] != 0, axis=1)

    def evaluate(self, chunk):
        self._require_phi()
        f, space = self.field, self.space
        w, c = chunk.vectors, chunk.scalars
        m, ell = self.datum.m, self.datum.ell
        d = chunk.cache["d"]
        inv_d = self._safe_inv(d, "1 - gamma_1 - ... - gamma_i")
        form_ell, form_m = self.forms
        g = f.mul(c, f.bilinear(self._col(w, m), form_m, self._col(w, m)))
        h = np.zeros(len(chunk), dtype=np.int64)
        for i in range(1, ell):
            image = f.matvec(self.maps[i - 1], self._col(w, i))
            term = f.bilinear(image, space.block(i + 1, m - i), self._col(w, m - i))
            h = f.add(h, f.mul(f.mul(c, term), inv_d[:, i]))
        top = f.bilinear(self._col(w, ell), form_ell, self._col(w, m - ell))
        h = f.add(h, f.mul(f.mul(c, top), inv_d[:, ell]))
        f_prime = f.mul(d[:, :-1], inv_d[:, 1:])
        return Evaluation(g=g, h=h, f_prime=f_prime)


class SplitFamily(SumFamily):
    """
    The Iwahori case of GL_n: (G_m)^(n-1) with f = x*c/(y_1...y_{n-1}) + sum y_i,
    c the product of the affine coordinates of phi.
    """

    def _constant(self) -> int:
        value = 1
        for matrix in self.maps:
            value = int(self.field.mul(value, int(matrix[0, 0])))
        return value

    def _raw_chunks(self, chunk_size):
        for vectors in affine_points(self.field, self.datum.n - 1, chunk_size, nonzero=True):
            yield DomainChunk(vectors=vectors)

    def _fill_cache(self, chunk):
        f = self.field
        product = np.ones(len(chunk), dtype=np.int64)
        for k in range(chunk.vectors.shape[1]):
            product = f.mul(product, chunk.vectors[:, k])
        chunk.cache["product"] = product[:, None]

    def _mask(self, chunk):
        return chunk.cache["product"][:, 0] != 0

    def evaluate(self, chunk):
        self._require_phi()
        f = self.field
        product = chunk.cache["product"][:, 0]
        g = f.mul(self._constant(), self._safe_inv(product, "y_1...y_{n-1}"))
        h = f.sum(chunk.vectors, axis=-1) if chunk.vectors.shape[1] else np.zeros(len(chunk), dtype=np.int64)
        return Evaluation(g=g, h=h, f_prime=np.zeros((len(chunk), 0), dtype=np.int64))


FAMILIES = {
    "unitary": UnitaryFamily,
    "orthogonal": OrthogonalFamily,
    "symplectic": SymplecticFamily,
    "split": SplitFamily,
}


def make_family(datum: GroupDatum, space: GradedQuadraticSpace, phi: Optional[StableFunctional] = None) -> SumFamily:
    """The domain family for a datum, with phi validated against the block shapes."""
    try:
        cls = FAMILIES[datum.family]
    except KeyError:
        raise InvalidInputError(f"no summation domain for type {datum.type_tag.value}")
    return cls(datum, space, phi)
