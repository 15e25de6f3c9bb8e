"""Span tests, purity, Euler characteristics and the A/B reconstruction oracle."""

from src.verify.euler import euler_characteristic_estimate
from src.verify.models import PronyEstimate, PurityResult, ReconstructionResult, SpanTestResult, SuiteReport
from src.verify.purity import purity_check
from src.verify.reconstruction import reconstruction_oracle, reconstruction_report
from src.verify.span import random_control, span_test_even_unitary, span_test_odd_unitary

__all__ = [
    "PronyEstimate",
    "PurityResult",
    "ReconstructionResult",
    "SpanTestResult",
    "SuiteReport",
    "euler_characteristic_estimate",
    "purity_check",
    "random_control",
    "reconstruction_oracle",
    "reconstruction_report",
    "span_test_even_unitary",
    "span_test_odd_unitary",
]
