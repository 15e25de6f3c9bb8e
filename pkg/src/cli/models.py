"""
CLI models.

This module defines the RunConfig every command is driven by. A RunConfig is
embedded in each result file, and `replay` re-runs a file from it.
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from src.core.errors import InvalidInputError
from src.core.models import GroupType
from src.quadform.models import StableFunctional


class Command(str, Enum):
    """Commands a RunConfig can drive."""
    TRACE = "trace"
    TABLES = "tables"
    VERIFY = "verify"
    STABILITY = "stability"


class Suite(str, Enum):
    """Verification suites."""
    UM2_ODD = "um2-odd"
    UM2_EVEN = "um2-even"
    PURITY = "purity"
    EULER = "euler"
    RECONSTRUCTION = "reconstruction"
    CONSISTENCY = "consistency"
    FT_IDENTITY = "ft-identity"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


PHI_KINDS = ("canonical", "canonical-degenerate", "diag:", "matrices:")


class RunConfig(BaseModel):
    """Everything a command needs, in the symbols of the sum formula."""
    command: Command = Field(..., description="Command to run")
    type_tag: GroupType = Field(GroupType.UNITARY, description="Group type")
    n: Optional[int] = Field(None, ge=1, description="Rank parameter")
    m: Optional[int] = Field(None, ge=1, description="Regular elliptic number")
    d: Optional[int] = Field(None, ge=1, description="Divisor parameter; derived from m when omitted")
    q: Optional[int] = Field(None, description="Field order, alternative to p and e")
    p: Optional[int] = Field(None, description="Characteristic")
    e: int = Field(1, ge=1, description="Degree over the prime field")
    modulus: Optional[List[int]] = Field(None, description="Field modulus, coefficients high to low")
    field_seed: int = Field(0, description="Seed of the modulus search")
    phi: str = Field("canonical", description="canonical, canonical-degenerate, diag:v1,...,vk or matrices:path.json")
    functional: Optional[StableFunctional] = Field(None, description="Resolved matrices of a matrices: phi")
    chi: Optional[List[int]] = Field(None, description="Character exponents in f' order; trivial when omitted")
    psi_multiplier: int = Field(1, description="a in psi(x) = psi_0(a x)")
    format: OutputFormat = Field(OutputFormat.JSON, description="Output format")
    threads: Optional[int] = Field(None, ge=1, description="Worker threads")
    suite: Optional[Suite] = Field(None, description="Verification suite")
    n_max: Optional[int] = Field(None, ge=1, description="Largest rank for tables and consistency")
    k_max: Optional[int] = Field(None, ge=1, description="Number of power sums for the Euler estimate")
    limit: Optional[int] = Field(None, ge=1, description="Sampled points for the reconstruction oracle")
    seed: int = Field(0, description="Seed for functional searches and sampling")
    oracle: bool = Field(False, description="Cross-check Springer dimensions with matrix centralizers")
    output: Optional[str] = Field(None, description="Output path; a path under the results directory by default")

    @model_validator(mode="after")
    def _check_phi(self) -> "RunConfig":
        if not self.phi.startswith(PHI_KINDS):
            raise ValueError(f"phi must be one of canonical, canonical-degenerate, diag:..., matrices:..., got {self.phi!r}")
        if self.suite in (Suite.UM2_ODD, Suite.UM2_EVEN) and self.m is None:
            self.m = 2
        return self

    @property
    def degenerate(self) -> bool:
        return self.phi == "canonical-degenerate"

    def diag_values(self) -> List[int]:
        """
        Raises:
            InvalidInputError: If the diag: list is empty or not integral
        """
        body = self.phi[len("diag:"):]
        try:
            values = [int(v) for v in body.split(",") if v.strip()]
        except ValueError:
            raise InvalidInputError(f"diag: expects comma-separated integers, got {body!r}")
        if not values:
            raise InvalidInputError("diag: needs at least one value")
        return values

    def replay_key(self) -> dict:
        """The fields a replayed result must agree on; output location excluded."""
        return self.model_dump(mode="json", exclude={"output", "threads"})
