"""
Regular elliptic numbers and the static data of exceptional types.
"""

from typing import Dict, List, Optional, Tuple

from src.core.errors import ClassificationError
from src.core.models import GroupType
from src.quadform.datum import MIN_N, divisor_options


MAX_CLASSICAL_RANK = 12

# (m, Bala-Carter label of u_m) per exceptional type, with the dual ambient type
EXCEPTIONAL_TABLE: Dict[GroupType, Tuple[str, List[Tuple[int, str]]]] = {
    GroupType.E6: ("E6", [(3, "2A2+A1"), (6, "E6(a3)"), (9, "E6(a1)"), (12, "E6")]),
    GroupType.E6_OUTER: ("F4", [(2, "A1"), (4, "A2+~A1"), (6, "F4(a3)"), (12, "F4(a1)"), (18, "F4")]),
    GroupType.E7: ("E7", [(2, "4A1"), (6, "E7(a5)"), (14, "E7(a1)"), (18, "E7")]),
    GroupType.E8: ("E8", [
        (2, "4A1"), (3, "2A2+2A1"), (4, "2A3"), (5, "A4+A3"), (6, "E8(a7)"), (8, "A7"),
        (10, "E8(a6)"), (12, "E8(a5)"), (15, "E8(a4)"), (20, "E8(a2)"), (24, "E8(a1)"), (30, "E8"),
    ]),
    GroupType.F4: ("F4", [(2, "A1+~A1"), (3, "~A2+A1"), (4, "F4(a3)"), (6, "F4(a2)"), (8, "F4(a1)"), (12, "F4")]),
    GroupType.G2: ("G2", [(2, "~A1"), (3, "G2(a1)"), (6, "G2")]),
    GroupType.D4_TRIALITY: ("G2", [(3, "A1"), (6, "G2(a1)"), (12, "G2")]),
}

EXCEPTIONAL_ROOT_COUNTS = {
    GroupType.E6: 72,
    GroupType.E6_OUTER: 72,
    GroupType.E7: 126,
    GroupType.E8: 240,
    GroupType.F4: 48,
    GroupType.G2: 12,
    GroupType.D4_TRIALITY: 24,
}


def root_count(type_tag: GroupType, n: Optional[int] = None) -> int:
    """#Phi of the absolute root system."""
    type_tag = GroupType(type_tag)
    if type_tag in EXCEPTIONAL_ROOT_COUNTS:
        return EXCEPTIONAL_ROOT_COUNTS[type_tag]
    if n is None:
        raise ClassificationError(f"type {type_tag.value} needs a rank", rule="classical types need n")
    if type_tag in (GroupType.A_SPLIT, GroupType.UNITARY):
        return n * (n - 1)
    if type_tag in (GroupType.B, GroupType.C):
        return 2 * n * n
    return 2 * n * (n - 1)


def check_rank(type_tag: GroupType, n: int) -> None:
    """
    Raises:
        ClassificationError: If n is outside the supported range of the type
    """
    low = MIN_N.get(type_tag, 1)
    if not low <= n <= MAX_CLASSICAL_RANK:
        rule = f"{low} <= n <= {MAX_CLASSICAL_RANK}"
        raise ClassificationError(f"type {type_tag.value} is supported for {rule}, got n={n}", rule=rule)


def regular_elliptic_numbers(type_tag, n: Optional[int] = None) -> List[Tuple[int, Optional[int]]]:
    """
    All (m, d) for a type, sorted by d (classical) or m (exceptional, d is None).

    Raises:
        ClassificationError: For unknown types or unsupported ranks
    """
    try:
        type_tag = GroupType(type_tag)
    except ValueError:
        raise ClassificationError(f"unknown group type {type_tag!r}", rule="known types only")
    if not type_tag.is_classical:
        return [(m, None) for m, _ in EXCEPTIONAL_TABLE[type_tag][1]]
    if n is None:
        raise ClassificationError(f"type {type_tag.value} needs a rank", rule="classical types need n")
    check_rank(type_tag, n)
    return [(o.m, o.d) for o in divisor_options(type_tag, n)]
