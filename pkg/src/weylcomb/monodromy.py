"""
Unipotent monodromy classes u_m.

Classical rows are partition formulas in (m, d); exceptional rows are
Bala-Carter labels from static data.
"""

import logging
from typing import List, Tuple

from src.core.errors import ClassificationError
from src.core.models import GroupType
from src.quadform.datum import RULES, make_datum
from src.weylcomb.elliptic import EXCEPTIONAL_TABLE
from src.weylcomb.models import AmbientType, UnipotentClass


logger = logging.getLogger("klspark.weylcomb")


def ambient(type_tag: GroupType, n: int) -> Tuple[AmbientType, int]:
    """(type, size) of the ambient classical dual group."""
    if type_tag == GroupType.A_SPLIT:
        return AmbientType.A, n
    if type_tag == GroupType.UNITARY:
        return (AmbientType.B, n) if n % 2 else (AmbientType.C, n)
    if type_tag == GroupType.B:
        return AmbientType.C, 2 * n
    if type_tag == GroupType.C:
        return AmbientType.B, 2 * n + 1
    if type_tag == GroupType.D:
        return AmbientType.D, 2 * n
    return AmbientType.B, 2 * n - 1


def _blocks(type_tag: GroupType, n: int, m: int, d: int) -> List[Tuple[int, int]]:
    """(part, multiplicity) pieces of u_m."""
    half = m // 2
    if type_tag == GroupType.A_SPLIT:
        return [(n, 1)]
    if type_tag == GroupType.UNITARY:
        from_n = m * d == 2 * n
        if n % 2:
            return [(half, d)] if from_n else [(1, 1), (half, d)]
        if from_n:
            return [(half - 1, 1), (half, d - 2), (half + 1, 1)]
        return [(half, d - 1), (half + 1, 1)]
    if type_tag == GroupType.B:
        return [(m, d)]
    if type_tag == GroupType.C:
        if d % 2:
            return [(m, d - 1), (m + 1, 1)]
        return [(1, 1), (m - 1, 1), (m, d - 2), (m + 1, 1)]
    if type_tag == GroupType.D:
        if m * d == 2 * n:
            return [(m - 1, 1), (m, d - 2), (m + 1, 1)]
        return [(1, 1), (m, d - 1), (m + 1, 1)]
    if m * d == 2 * n:
        return [(m - 1, 1), (m, d - 1)]
    return [(1, 1), (m, d)]


def partition_from_blocks(blocks: List[Tuple[int, int]]) -> List[int]:
    parts = [size for size, count in blocks for _ in range(count) if size > 0]
    return sorted(parts, reverse=True)


def unipotent_monodromy_class(type_tag, n: int, m: int, d: int = None) -> UnipotentClass:
    """
    The class u_m of the table of unipotent monodromy.

    Raises:
        ClassificationError: If (m, d) is not admissible for the type
    """
    type_tag = GroupType(type_tag)
    if not type_tag.is_classical:
        ambient_label, rows = EXCEPTIONAL_TABLE[type_tag]
        for row_m, label in rows:
            if row_m == m:
                return UnipotentClass(type_tag=type_tag, m=m, ambient=ambient_label, label=label)
        allowed = ", ".join(str(r) for r, _ in rows)
        rule = f"m must be one of {allowed} for {type_tag.value}"
        raise ClassificationError(rule, rule=rule)
    datum = make_datum(type_tag, n, m, d)
    kind, size = ambient(type_tag, n)
    partition = partition_from_blocks(_blocks(type_tag, n, datum.m, datum.d))
    if sum(partition) != size:
        raise ClassificationError(
            f"partition {partition} of u_m does not have size {size}", rule=RULES[type_tag]
        )
    return UnipotentClass(
        type_tag=type_tag, n=n, m=datum.m, ambient=kind.value, ambient_size=size, partition=partition
    )
