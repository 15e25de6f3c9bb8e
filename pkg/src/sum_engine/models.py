"""
Sum engine models.

This module defines domain points, character specifications and trace tables.
"""

from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field

from src.core.models import Backend, FieldSpec


class DomainPoint(BaseModel):
    """One point of the summation domain with its cached block values."""
    vector: List[int] = Field(..., description="Normalized representative v, or w for symplectic tensors")
    scalar: Optional[int] = Field(None, description="c of the tensor c.w(x)w; 0 for the zero tensor")
    cache: Dict[str, Union[int, List[int]]] = Field(
        default_factory=dict, description="Cached q_[.] values, gamma_i or the scalar q_total"
    )

    @property
    def is_zero_tensor(self) -> bool:
        return self.scalar == 0


class CharacterSpec(BaseModel):
    """Exponents of the components of chi, in f' order."""
    exponents: List[int] = Field(default_factory=list, description="r_k with chi_k(x) = zeta_{q-1}^(r_k dlog x)")

    @classmethod
    def trivial(cls, arity: int) -> "CharacterSpec":
        return cls(exponents=[0] * arity)


class TraceEntry(BaseModel):
    """S(t) for one t."""
    t: int = Field(..., description="t in F_q^x")
    coeffs: Optional[List[int]] = Field(None, description="Canonical Z[zeta_p] coefficients (exact backend)")
    re: float = Field(..., description="Real part of the complex embedding")
    im: float = Field(..., description="Imaginary part of the complex embedding")


class Normalization(BaseModel):
    """The (-1)^w q^(-w/2) view of the table."""
    w: int = Field(..., description="Weight")
    sign: int = Field(..., description="(-1)^w")
    q: int = Field(..., description="Field order")

    def factor(self) -> float:
        return self.sign * float(self.q) ** (-self.w / 2)


class StabilityRecord(BaseModel):
    stable: bool = Field(..., description="Stability verdict")
    reason: Optional[str] = Field(None, description="Why phi is unstable")


class TraceTable(BaseModel):
    """S(t) over F_q^x with the configuration that produced it."""
    config: Dict[str, Any] = Field(default_factory=dict, description="datum, phi, chi and psi multiplier")
    field: FieldSpec = Field(..., description="Field spec")
    backend: Backend = Field(..., description="Accumulation backend")
    entries: List[TraceEntry] = Field(default_factory=list, description="One entry per t, increasing t")
    stability: StabilityRecord = Field(..., description="Stability of phi")
    normalization: Normalization = Field(..., description="Normalization metadata")
    domain_size: int = Field(0, description="Number of domain points summed over")
    warnings: List[str] = Field(default_factory=list, description="Non-blocking warnings")

    def ts(self) -> np.ndarray:
        return np.array([e.t for e in self.entries], dtype=np.int64)

    def values(self) -> np.ndarray:
        return np.array([complex(e.re, e.im) for e in self.entries], dtype=np.complex128)

    def normalized(self) -> np.ndarray:
        return self.values() * self.normalization.factor()

    def exact_coeffs(self) -> Optional[List[List[int]]]:
        if self.backend != Backend.EXACT:
            return None
        return [e.coeffs for e in self.entries]

    def csv_rows(self) -> List[Dict[str, Any]]:
        normalized = self.normalized()
        return [
            {"t": e.t, "abs_normalized": abs(z), "re": e.re, "im": e.im}
            for e, z in zip(self.entries, normalized)
        ]


CSV_COLUMNS = ["t", "abs_normalized", "re", "im"]
