"""
Shared data models for KlSpark.

These models are used by more than one area package: group type tags,
field specifications, verification statuses and the envelopes that
results and service runs travel in.
"""

from enum import Enum
from typing import Any, Dict, List, Optional
from datetime import datetime
from pydantic import BaseModel, Field


VERSION = "0.3.0"


class GroupType(str, Enum):
    """Type tags of the groups handled by KlSpark."""
    A_SPLIT = "A"
    UNITARY = "2A"
    B = "B"
    C = "C"
    D = "D"
    D_OUTER = "2D"
    E6 = "E6"
    E6_OUTER = "2E6"
    E7 = "E7"
    E8 = "E8"
    F4 = "F4"
    G2 = "G2"
    D4_TRIALITY = "3D4"

    @property
    def is_classical(self) -> bool:
        return self in CLASSICAL_TYPES

    @property
    def family(self) -> str:
        """One of split, unitary, symplectic, orthogonal, exceptional."""
        if self == GroupType.A_SPLIT:
            return "split"
        if self == GroupType.UNITARY:
            return "unitary"
        if self == GroupType.C:
            return "symplectic"
        if self in (GroupType.B, GroupType.D, GroupType.D_OUTER):
            return "orthogonal"
        return "exceptional"


CLASSICAL_TYPES = (
    GroupType.A_SPLIT,
    GroupType.UNITARY,
    GroupType.B,
    GroupType.C,
    GroupType.D,
    GroupType.D_OUTER,
)


class VerificationStatus(str, Enum):
    """Outcome of a verification."""
    PASS = "pass"
    FAIL = "fail"
    INAPPLICABLE = "inapplicable"
    INCONCLUSIVE = "inconclusive"
    PARTIAL = "partial"


class Backend(str, Enum):
    """Character-sum accumulation backends."""
    EXACT = "exact"
    FLOAT = "float"


class FieldSpec(BaseModel):
    """Everything needed to rebuild a finite field bit-exactly."""
    p: int = Field(..., description="Odd characteristic")
    e: int = Field(1, ge=1, description="Degree over the prime field")
    modulus: Optional[List[int]] = Field(
        None, description="Monic primitive modulus over F_p, coefficients high to low"
    )
    seed: int = Field(0, description="Seed of the modulus search")

    @property
    def q(self) -> int:
        return self.p ** self.e


class RunStatus(str, Enum):
    """Status values for service runs."""
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"
    FAILED = "failed"


class ResultEnvelope(BaseModel):
    """A result file: the payload together with the configuration that produced it."""
    version: str = Field(default=VERSION, description="KlSpark version that wrote this file")
    run_id: str = Field(..., description="Identifier of the run")
    command: str = Field(..., description="Command that produced the result")
    config: Dict[str, Any] = Field(..., description="Serialized RunConfig")
    result: Dict[str, Any] = Field(default_factory=dict, description="Command payload")
    warnings: List[str] = Field(default_factory=list, description="Non-blocking warnings")
    exit_code: int = Field(0, description="Exit code the command reported")


class RunRecord(BaseModel):
    """A computation submitted to the service."""
    id: str = Field(..., description="Unique identifier for this run")
    status: RunStatus = Field(default=RunStatus.PENDING, description="Current status of the run")
    config: Dict[str, Any] = Field(..., description="Serialized RunConfig")
    created_at: datetime = Field(default_factory=datetime.now, description="When the run was created")
    updated_at: datetime = Field(default_factory=datetime.now, description="When the run was last updated")
    result: Optional[Dict[str, Any]] = Field(None, description="Result envelope once completed")
    metadata: Optional[Dict[str, Any]] = Field(None, description="Additional metadata, e.g. the error of a failed run")

    def update_status(self, status: RunStatus) -> None:
        """Update the status of this run."""
        self.status = status
        self.updated_at = datetime.now()


class Capability(BaseModel):
    """A command the service can run."""
    id: str = Field(..., description="Command name")
    name: str = Field(..., description="Human-readable name of the command")
    description: str = Field(..., description="What the command computes")
    parameters: Optional[Dict[str, Any]] = Field(None, description="Parameters the command accepts")


class ServiceCard(BaseModel):
    """Self-description served at GET /card."""
    id: str = Field(..., description="Service identifier")
    name: str = Field(..., description="Human-readable service name")
    description: str = Field(..., description="What the service does")
    version: str = Field(..., description="Service version")
    capabilities: List[Capability] = Field(default_factory=list, description="Commands this service runs")
    endpoints: Dict[str, str] = Field(..., description="API endpoints the service exposes")
