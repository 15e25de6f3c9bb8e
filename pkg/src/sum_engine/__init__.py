"""Domains, trace functions and the classical Kloosterman baseline."""

from src.sum_engine.engine import (
    TraceEngine,
    enumerate_domain,
    f_phi_eval,
    f_prime_eval,
    fiber_count_transform,
    fiber_counts,
    normalized_trace,
    t_sum,
    trace_sum,
    trace_table,
)
from src.sum_engine.families import make_family
from src.sum_engine.kloosterman import classical_kloosterman
from src.sum_engine.models import CharacterSpec, DomainPoint, TraceEntry, TraceTable

__all__ = [
    "CharacterSpec",
    "DomainPoint",
    "TraceEngine",
    "TraceEntry",
    "TraceTable",
    "classical_kloosterman",
    "enumerate_domain",
    "f_phi_eval",
    "f_prime_eval",
    "fiber_count_transform",
    "fiber_counts",
    "make_family",
    "normalized_trace",
    "t_sum",
    "trace_sum",
    "trace_table",
]
