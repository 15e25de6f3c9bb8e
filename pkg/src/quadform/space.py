"""
Graded quadratic and symplectic spaces.

The Gram matrix S of the space is stored in a basis adapted to the blocks
M_i (in the datum's block order). For the orthogonal and unitary models
q(v) = v^T S v / 2 and (x, y) = x^T S y; for the symplectic model S is the
alternating matrix of omega.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core.errors import InvalidInputError
from src.cyclofield import linalg
from src.cyclofield.field import Field
from src.quadform.models import GroupDatum


logger = logging.getLogger("klspark.space")


class GradedQuadraticSpace:
    """M = sum of M_i with its form, block slices and partial forms."""

    def __init__(self, datum: GroupDatum, field: Field, gram: np.ndarray, seed: Optional[int] = None):
        self.datum = datum
        self.field = field
        self.gram = np.asarray(gram, dtype=np.int64)
        self.seed = seed
        self.slices: Dict[int, slice] = {}
        start = 0
        for block in datum.blocks:
            self.slices[block.label] = slice(start, start + block.dim)
            start += block.dim
        if self.gram.shape != (start, start):
            raise InvalidInputError(f"Gram matrix shape {self.gram.shape} does not match dim {start}")
        self.inv2 = int(field.inv(2))

    def __repr__(self) -> str:
        return f"GradedQuadraticSpace({self.datum.type_tag.value}, n={self.datum.n}, m={self.datum.m}, q={self.field.q})"

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @property
    def is_symplectic(self) -> bool:
        return self.datum.family == "symplectic"

    def block(self, i: int, j: int) -> np.ndarray:
        """The (M_i, M_j) block of the Gram matrix."""
        return self.gram[self.slices[i], self.slices[j]]

    def coords(self, vectors: np.ndarray, label: int) -> np.ndarray:
        return vectors[..., self.slices[label]]

    def pairs_with(self, i: int) -> int:
        """Label of the block M_i is paired with."""
        family = self.datum.family
        if family == "unitary":
            return -i
        if family == "symplectic":
            return self.datum.m + 1 - i
        if family == "orthogonal":
            return (-i) % self.datum.m
        return i

    def pairing(self, x: np.ndarray, i: int, y: np.ndarray, j: int) -> np.ndarray:
        """(x_i, y_j) row-wise for x_i in M_i and y_j in M_j."""
        return self.field.bilinear(x, self.block(i, j), y)

    def quadratic(self, vectors: np.ndarray, labels: Optional[List[int]] = None) -> np.ndarray:
        """q restricted to the sum of the given blocks (all blocks by default)."""
        if labels is None:
            sub = vectors
            gram = self.gram
        else:
            idx = np.concatenate([np.arange(self.dim)[self.slices[l]] for l in labels]) if labels else np.zeros(0, dtype=np.int64)
            sub = vectors[..., idx]
            gram = self.gram[np.ix_(idx, idx)]
        return self.field.mul(self.field.bilinear(sub, gram, sub), self.inv2)

    def truncated(self, vectors: np.ndarray, low: int, high: int) -> np.ndarray:
        """q_[low, high]: q restricted to the blocks with labels in [low, high]."""
        return self.quadratic(vectors, [l for l in self.datum.labels if low <= l <= high])

    def extend(self, extension: Field) -> "GradedQuadraticSpace":
        """The same space over an extension field (entries embedded)."""
        embedding = extension.embedding
        return GradedQuadraticSpace(self.datum, extension, embedding.embed(self.gram), self.seed)

    def check_pairing_pattern(self) -> List[Tuple[int, int]]:
        """Block pairs that are nonzero but should vanish; empty when the pattern holds."""
        bad = []
        family = self.datum.family
        for i in self.datum.labels:
            for j in self.datum.labels:
                if family == "unitary":
                    allowed = i + j == 0
                elif family == "symplectic":
                    allowed = i + j == self.datum.m + 1
                elif family == "orthogonal":
                    allowed = (i + j) % self.datum.m == 0
                else:
                    allowed = True
                if not allowed and np.any(self.block(i, j)):
                    bad.append((i, j))
        return bad


def orthogonal_top_form(field: Field, dim: int) -> np.ndarray:
    """diag(1, 2, ..., dim) reduced into F_p^x; the fixed form on M_l."""
    values = [(k % (field.p - 1)) + 1 for k in range(dim)]
    return np.diag(np.array(values, dtype=np.int64))


def build_space(datum: GroupDatum, field: Field, seed: Optional[int] = None) -> GradedQuadraticSpace:
    """
    Standard split form respecting the block pairing rules.

    Dual blocks are paired by the identity (hyperbolic pairing); M_0 carries the
    identity Gram matrix and, for orthogonal types, M_l carries diag(1, 2, ...).
    With a seed, a random block-diagonal change of basis is applied.
    """
    n_total = datum.dim
    gram = np.zeros((n_total, n_total), dtype=np.int64)
    space = GradedQuadraticSpace(datum, field, gram)
    s = space.slices
    family = datum.family
    labels = datum.labels

    if family == "split":
        gram[:] = np.eye(n_total, dtype=np.int64)
    elif family == "unitary":
        for i in labels:
            if i == 0:
                gram[s[0], s[0]] = np.eye(datum.block_dim(0), dtype=np.int64)
            else:
                gram[s[i], s[-i]] = np.eye(datum.block_dim(i), dtype=np.int64)
    elif family == "symplectic":
        m, ell = datum.m, datum.ell
        one, minus = 1, int(field.neg(1))
        for i in labels:
            j = m + 1 - i
            gram[s[i], s[j]] = np.eye(datum.d, dtype=np.int64) * (one if i <= ell else minus)
    else:
        m, ell = datum.m, datum.ell
        for i in labels:
            if i == 0:
                gram[s[0], s[0]] = np.eye(datum.block_dim(0), dtype=np.int64)
            elif i == ell:
                gram[s[ell], s[ell]] = orthogonal_top_form(field, datum.block_dim(ell))
            else:
                gram[s[i], s[m - i]] = np.eye(datum.block_dim(i), dtype=np.int64)

    if seed is not None:
        rng = np.random.default_rng(seed)
        basis = np.zeros_like(gram)
        for label in labels:
            k = datum.block_dim(label)
            while True:
                block = field.random_elements(rng, (k, k))
                if k == 0 or linalg.rank(field, block) == k:
                    break
            basis[s[label], s[label]] = block
        gram = linalg.congruence(field, gram, basis)
    return GradedQuadraticSpace(datum, field, gram, seed)
