"""
Weyl-combinatorics models.

This module defines parahoric data, Levi factors, unipotent classes and the
rows of the unipotent-monodromy tables.
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from src.core.models import GroupType, VerificationStatus


class LeviKind(str, Enum):
    GL = "GL"
    SO = "SO"
    TORUS = "torus"


class LeviFactor(BaseModel):
    """One factor GL_size, SO_size, or a split torus of rank size."""
    kind: LeviKind = Field(..., description="Factor type")
    size: int = Field(..., ge=0, description="Matrix size or torus rank")
    block: Optional[int] = Field(None, description="Label of the graded block it acts on")

    @property
    def dim(self) -> int:
        if self.kind == LeviKind.GL:
            return self.size * self.size
        if self.kind == LeviKind.SO:
            return self.size * (self.size - 1) // 2
        return self.size

    @property
    def positive_roots(self) -> int:
        if self.kind == LeviKind.GL:
            return self.size * (self.size - 1) // 2
        if self.kind == LeviKind.SO:
            r = self.size // 2
            return r * r if self.size % 2 else r * (r - 1)
        return 0

    def label(self) -> str:
        if self.kind == LeviKind.TORUS:
            return f"G_m^{self.size}"
        return f"{self.kind.value}_{self.size}"


class ParahoricDatum(BaseModel):
    """Admissible parahoric P_m with its Levi description."""
    type_tag: GroupType = Field(..., description="Group type")
    n: int = Field(..., ge=1, description="Rank parameter")
    m: int = Field(..., ge=1, description="Regular elliptic number")
    d: int = Field(..., ge=1, description="Divisor parameter")
    levi: List[LeviFactor] = Field(default_factory=list, description="Factors of L_P")
    root_count: int = Field(..., description="#Phi of the absolute root system")

    @property
    def levi_dim(self) -> int:
        return sum(f.dim for f in self.levi)

    @property
    def levi_length(self) -> int:
        """l(w_P), the number of positive roots of L_P."""
        return sum(f.positive_roots for f in self.levi)

    def levi_label(self) -> str:
        return " x ".join(f.label() for f in self.levi if f.size > 0) or "1"


class AmbientType(str, Enum):
    """Type of the classical Lie algebra the unipotent class lives in."""
    A = "A"
    B = "B"
    C = "C"
    D = "D"


class UnipotentClass(BaseModel):
    """A unipotent class of the dual group: partition (classical) or Bala-Carter label."""
    type_tag: GroupType = Field(..., description="Type of G")
    n: Optional[int] = Field(None, description="Rank parameter (classical types)")
    m: int = Field(..., description="Regular elliptic number")
    ambient: str = Field(..., description="Type of the ambient dual group, e.g. B or E8")
    ambient_size: Optional[int] = Field(None, description="Size of the standard representation (classical)")
    partition: Optional[List[int]] = Field(None, description="Jordan block sizes, decreasing")
    label: Optional[str] = Field(None, description="Bala-Carter label (exceptional)")
    springer_dim: Optional[int] = Field(None, description="dim of the Springer fibre when computed")

    @property
    def is_classical(self) -> bool:
        return self.partition is not None

    def partition_text(self) -> str:
        if self.partition is None:
            return self.label or ""
        return "[" + ",".join(str(p) for p in self.partition) + "]"


class TableRow(BaseModel):
    """One row of the unipotent-monodromy table."""
    type_tag: GroupType = Field(..., description="Group type")
    n: Optional[int] = Field(None, description="Rank parameter")
    m: int = Field(..., description="Regular elliptic number")
    d: Optional[int] = Field(None, description="Divisor parameter")
    unipotent: str = Field(..., description="Partition or Bala-Carter label")
    ambient: str = Field(..., description="Ambient dual group type")
    springer_dim: Optional[int] = Field(None, description="dim B_u")
    levi_length: Optional[int] = Field(None, description="l(w_P)")
    roots_over_m: Optional[int] = Field(None, description="#Phi / m")
    consistent: Optional[bool] = Field(None, description="Consistency verdict of the row")


TABLE_COLUMNS = ["type_tag", "n", "m", "d", "unipotent", "ambient", "springer_dim", "levi_length", "roots_over_m", "consistent"]


class ConsistencyRow(BaseModel):
    """The identities of one (m, d) row."""
    m: int = Field(..., description="Regular elliptic number")
    d: int = Field(..., description="Divisor parameter")
    partition: List[int] = Field(default_factory=list, description="Unipotent class")
    springer_dim: Optional[int] = Field(None, description="dim B_u from the partition formula")
    oracle_dim: Optional[int] = Field(None, description="dim B_u from the matrix centralizer")
    levi_length: int = Field(..., description="l(w_P)")
    half_levi_roots: int = Field(..., description="#Psi(L_P) / 2")
    levi_dim: int = Field(..., description="dim L_P")
    roots_over_m: Optional[int] = Field(None, description="#Phi / m when integral")
    failures: List[str] = Field(default_factory=list, description="Identities that failed")

    @property
    def passed(self) -> bool:
        return not self.failures


class ConsistencyReport(BaseModel):
    """Row-by-row result of the consistency identities for one type and rank."""
    type_tag: GroupType = Field(..., description="Group type")
    n: int = Field(..., description="Rank parameter")
    rows: List[ConsistencyRow] = Field(default_factory=list, description="One row per (m, d)")
    status: VerificationStatus = Field(VerificationStatus.PASS, description="Overall verdict")
