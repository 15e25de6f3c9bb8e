"""
Verification models.

This module defines the reports produced by the span tests, the purity
check, the Euler characteristic estimate, the reconstruction oracle and
the suites that drive them.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from src.core.models import VerificationStatus


SPAN_TOLERANCE = 1e-6
CONTROL_THRESHOLD = 0.1
PURITY_SLACK = 1e-9
HANKEL_TOLERANCE = 1e-6
HANKEL_GAP = 10.0
AMPLITUDE_TOLERANCE = 0.1


class SpanTestResult(BaseModel):
    """Least-squares fit of S(t) against a basis of model vectors."""
    basis: str = Field(..., description="Description of the basis vectors")
    basis_size: int = Field(..., description="Number of basis vectors")
    samples: int = Field(..., description="Number of t values")
    determined: bool = Field(..., description="Whether the basis spans less than the whole sample space")
    residual: float = Field(..., ge=0.0, description="Norm of the least-squares residual")
    target_norm: float = Field(..., ge=0.0, description="Norm of the target vector")
    coefficients: List[List[float]] = Field(default_factory=list, description="Fitted coefficients as [re, im]")
    passed: bool = Field(..., description="residual < tolerance * target norm")

    @property
    def relative_residual(self) -> float:
        return self.residual / self.target_norm if self.target_norm else 0.0


class PurityResult(BaseModel):
    """max_t |S(t)| / q^(w/2) against the rank bound."""
    max_ratio: float = Field(..., description="Largest normalized absolute value")
    rank: int = Field(..., description="Rank bound")
    w: int = Field(..., description="Weight")
    q: int = Field(..., description="Field order")
    passed: bool = Field(..., description="max_ratio <= rank + slack")


class PronyEstimate(BaseModel):
    """Exponential count of the Frobenius power sums N_1..N_k."""
    power_sums: List[List[float]] = Field(default_factory=list, description="N_k as [re, im], k = 1..k_achieved")
    normalization: float = Field(..., description="N_k was divided by normalization^k before fitting")
    k_max: int = Field(..., description="Requested number of power sums")
    k_achieved: int = Field(..., description="Power sums actually computed")
    singular_values: List[float] = Field(default_factory=list, description="Hankel singular values, decreasing")
    tolerance: float = Field(HANKEL_TOLERANCE, description="Relative cut for the numerical rank")
    estimate: Optional[int] = Field(None, description="Sum of the fitted amplitudes, i.e. dim H^1_c counted with multiplicity")
    hankel_rank: Optional[int] = Field(None, description="Numerical rank of the Hankel matrix (distinct eigenvalues)")
    gap: Optional[float] = Field(None, description="s_r / max(s_(r+1), tolerance * s_1)")
    confident: bool = Field(False, description="gap >= the required ratio")
    frequencies: List[List[float]] = Field(default_factory=list, description="Fitted normalized Frobenius eigenvalues")
    amplitudes: List[List[float]] = Field(default_factory=list, description="Fitted amplitudes")
    expected: Optional[int] = Field(None, description="d or d - 1 from stability data")
    assumption: str = Field(
        "H^0_c = H^2_c = 0, so the power sums see exactly H^1_c",
        description="Hypothesis under which the estimate is -chi_c",
    )
    status: VerificationStatus = Field(..., description="pass, fail, inconclusive or partial")


class ReconstructionResult(BaseModel):
    """A and B rebuilt from a domain point and checked against f' and f''."""
    vector: List[int] = Field(..., description="Domain point representative")
    scalar: Optional[int] = Field(None, description="c of a symplectic tensor")
    checks: Dict[str, bool] = Field(default_factory=dict, description="Named identities and their outcome")
    f_prime_oracle: List[int] = Field(default_factory=list, description="det of the diagonal blocks of B")
    f_prime_formula: List[int] = Field(default_factory=list, description="f' from the closed formulas")
    g_oracle: Optional[int] = Field(None, description="x-coefficient of <phi, f''(A, B)>")
    g_formula: Optional[int] = Field(None, description="x-coefficient of f_phi")
    h_oracle: Optional[int] = Field(None, description="Constant part of <phi, f''(A, B)>")
    h_formula: Optional[int] = Field(None, description="Constant part of f_phi")
    rank_a_minus_b: Optional[int] = Field(None, description="rank(A - B)")

    @property
    def failures(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]

    @property
    def match(self) -> bool:
        return all(self.checks.values())


class ReconstructionReport(BaseModel):
    """Oracle outcome over a set of domain points."""
    points: int = Field(..., description="Points checked")
    mismatches: List[ReconstructionResult] = Field(default_factory=list, description="Points where a check failed")
    exhaustive: bool = Field(..., description="Whether the whole domain was checked")
    status: VerificationStatus = Field(..., description="pass or fail")


class SuiteReport(BaseModel):
    """Report of one verify suite."""
    suite: str = Field(..., description="Suite name")
    status: VerificationStatus = Field(..., description="Overall outcome")
    metrics: Dict[str, Any] = Field(default_factory=dict, description="Residuals, ratios, singular values")
    details: Dict[str, Any] = Field(default_factory=dict, description="Sub-results of the suite")
    message: Optional[str] = Field(None, description="Why the suite is inapplicable or failed")
    warnings: List[str] = Field(default_factory=list, description="Non-blocking warnings")
