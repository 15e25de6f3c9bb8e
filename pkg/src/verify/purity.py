"""
Purity of normalized trace functions.
"""

import logging
from typing import Optional

import numpy as np

from src.sum_engine.models import TraceTable
from src.verify.models import PURITY_SLACK, PurityResult


logger = logging.getLogger("klspark.verify")


def purity_check(table: TraceTable, rank: int, w: Optional[int] = None) -> PurityResult:
    """
    max_t |S(t)| / q^(w/2) against the rank of the standard representation.

    Args:
        table: Trace table
        rank: Rank bound
        w: Weight; the table's normalization weight when omitted
    """
    w = table.normalization.w if w is None else int(w)
    q = table.normalization.q
    values = np.abs(table.values())
    max_ratio = float(values.max() / float(q) ** (w / 2)) if values.size else 0.0
    passed = max_ratio <= rank + PURITY_SLACK
    if not passed:
        logger.warning(f"Normalized trace reaches {max_ratio:.6f} > rank {rank}; table is not pure of weight {w}")
    return PurityResult(max_ratio=max_ratio, rank=rank, w=w, q=q, passed=passed)
