"""
Quadratic-space models.

This module defines the group data, functionals, pencils and stability
verdicts shared by the space, engine and verification packages.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.core.models import FieldSpec, GroupType


class BlockDim(BaseModel):
    """One graded piece M_i of the space."""
    label: int = Field(..., description="Grading index i")
    dim: int = Field(..., ge=0, description="dim M_i")


class GroupDatum(BaseModel):
    """Type tag with (n, m, d, l) and the graded block dimensions."""
    type_tag: GroupType = Field(..., description="Group type")
    n: int = Field(..., ge=1, description="Rank parameter")
    m: int = Field(..., ge=1, description="Regular elliptic number")
    d: int = Field(..., ge=1, description="Divisor parameter")
    ell: int = Field(..., ge=0, description="Derived index l")
    blocks: List[BlockDim] = Field(default_factory=list, description="Graded pieces in basis order")
    rule: str = Field("", description="Divisor rule this datum satisfies")
    warnings: List[str] = Field(default_factory=list, description="Non-blocking warnings")

    @property
    def family(self) -> str:
        return self.type_tag.family

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def block_dim(self, label: int) -> int:
        for block in self.blocks:
            if block.label == label:
                return block.dim
        raise KeyError(label)

    @property
    def labels(self) -> List[int]:
        return [b.label for b in self.blocks]

    @property
    def weight(self) -> int:
        """Cohomological shift w of the sum formula."""
        if self.family == "unitary":
            return self.n - 1
        if self.family == "symplectic":
            return 2 * self.n - 1
        if self.family == "orthogonal":
            return self.dim - 2
        return self.n - 1

    @property
    def standard_rank(self) -> int:
        """Dimension of the standard representation of the dual group."""
        if self.family == "symplectic":
            return 2 * self.n + 1
        if self.family == "orthogonal":
            return 2 * self.n
        return self.n

    @property
    def chi_arity(self) -> int:
        """Number of character exponents: sign component (if any) plus torus components."""
        if self.family == "unitary":
            return 1 + self.ell
        if self.family == "symplectic":
            return self.ell
        if self.family == "orthogonal":
            return self.ell
        return 0

    @property
    def has_sign_component(self) -> bool:
        return self.family in ("unitary", "orthogonal")


class StableFunctional(BaseModel):
    """
    A functional phi on V_P in its quiver form.

    unitary: maps phi_0..phi_{l-1}, forms [phi_l];
    symplectic: maps phi_1..phi_{l-1}, forms [phi_l, phi_m], each form b(x, y) = omega(phi x, y);
    orthogonal: maps phi_0..phi_{l-1}, no forms;
    split A: maps hold the n affine coordinates as 1x1 matrices.
    Forms are symmetric Gram matrices F with phi(v) = v^T F v / 2.
    """
    maps: List[List[List[int]]] = Field(default_factory=list, description="Block maps, row-major")
    forms: List[List[List[int]]] = Field(default_factory=list, description="Symmetric Gram matrices")
    source: str = Field("explicit", description="explicit, canonical or search")

    def map_arrays(self) -> List[np.ndarray]:
        return [np.array(m, dtype=np.int64).reshape(len(m), -1) if m else np.zeros((0, 0), dtype=np.int64) for m in self.maps]

    def form_arrays(self) -> List[np.ndarray]:
        return [np.array(f, dtype=np.int64).reshape(len(f), -1) if f else np.zeros((0, 0), dtype=np.int64) for f in self.forms]

    @classmethod
    def from_arrays(cls, maps: List[np.ndarray], forms: List[np.ndarray], source: str = "explicit") -> "StableFunctional":
        return cls(
            maps=[np.asarray(m, dtype=np.int64).tolist() for m in maps],
            forms=[np.asarray(f, dtype=np.int64).tolist() for f in forms],
            source=source,
        )

    def is_zero(self) -> bool:
        return not any(np.any(a) for a in self.map_arrays() + self.form_arrays())


class PencilRoot(BaseModel):
    """A degeneracy point of a pencil; value None is the point at infinity."""
    value: Optional[int] = Field(None, description="lambda in F_q, None for infinity")
    multiplicity: int = Field(..., ge=1, description="Multiplicity as a root of det(phi - lambda q)")


class Pencil(BaseModel):
    """The pencil spanned by two quadratic forms on a common space."""
    dim: int = Field(..., description="Dimension of the space")
    char_poly: List[int] = Field(..., description="det(phi - lambda q), coefficients high to low")
    roots: List[PencilRoot] = Field(default_factory=list, description="Rational degeneracy points")
    infinity_multiplicity: int = Field(0, description="dim - deg det(phi - lambda q)")
    squarefree: bool = Field(..., description="char_poly squarefree over the closure")
    degeneracy_count: int = Field(..., description="Distinct degeneracy points over P^1 of the closure")

    @property
    def degree(self) -> int:
        return len(self.char_poly) - 1

    @property
    def general_position(self) -> bool:
        return self.squarefree and self.infinity_multiplicity <= 1 and self.degeneracy_count == self.dim

    @property
    def rational_values(self) -> List[int]:
        return sorted(r.value for r in self.roots if r.value is not None)

    @property
    def all_roots_rational(self) -> bool:
        finite = sum(r.multiplicity for r in self.roots if r.value is not None)
        return finite == self.degree


class StabilityVerdict(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


class StabilityResult(BaseModel):
    """Verdict of is_stable with the data it was based on."""
    verdict: StabilityVerdict = Field(..., description="stable or unstable")
    reason: Optional[str] = Field(None, description="Why the functional is unstable")
    pencil: Optional[Pencil] = Field(None, description="Pencil the verdict was based on")
    phi_ell_nondegenerate: Optional[bool] = Field(None, description="Whether the transported phi_l is nondegenerate")

    @property
    def stable(self) -> bool:
        return self.verdict == StabilityVerdict.STABLE

    @classmethod
    def unstable(cls, reason: str, **kwargs: Any) -> "StabilityResult":
        return cls(verdict=StabilityVerdict.UNSTABLE, reason=reason, **kwargs)


class FormFile(BaseModel):
    """JSON shape of a functional file consumed by the stability command."""
    field: FieldSpec = Field(..., description="Field the entries live in")
    datum: Dict[str, Any] = Field(..., description="type, n, m and optionally d")
    functional: StableFunctional = Field(..., description="The functional")
