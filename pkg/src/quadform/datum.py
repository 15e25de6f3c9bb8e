"""
Divisor rules for classical group data.

Each admissible (m, d) of a classical type comes with the dimensions of the
graded pieces M_i; `make_datum` validates a requested (type, n, m, d) against
these rules and names the violated rule otherwise.
"""

import logging
from typing import List, NamedTuple, Optional

from src.core.errors import ClassificationError
from src.core.models import GroupType
from src.quadform.models import BlockDim, GroupDatum


MIN_N = {GroupType.UNITARY: 3, GroupType.D: 3, GroupType.D_OUTER: 3}

RULES = {
    GroupType.A_SPLIT: "m must be the Coxeter number n (only the Iwahori is admissible)",
    GroupType.UNITARY: "m must be 2n/d with n/d odd, or 2(n-1)/d with (n-1)/d odd and d < n-1",
    GroupType.C: "m must be 2n/d for a divisor d of n",
    GroupType.B: "m must be 2n/d for a divisor d of n",
    GroupType.D: "m must be 2n/d with d even dividing n, or 2(n-1)/d with d odd dividing n-1",
    GroupType.D_OUTER: "m must be 2n/d with d odd dividing n, or 2(n-1)/d with d even dividing n-1",
}

logger = logging.getLogger("klspark.datum")


class DivisorOption(NamedTuple):
    m: int
    d: int
    center_dim: int
    top_dim: int
    rule: str


def _divisors(k: int) -> List[int]:
    return [d for d in range(1, k + 1) if k % d == 0]


def divisor_options(type_tag: GroupType, n: int) -> List[DivisorOption]:
    """
    All admissible (m, d) for a classical type, sorted by increasing d.

    center_dim is dim M_0; top_dim is dim M_l for orthogonal types (0 otherwise).
    """
    options: List[DivisorOption] = []
    if type_tag == GroupType.A_SPLIT:
        return [DivisorOption(n, 1, 1, 0, "m = n")]
    if type_tag == GroupType.UNITARY:
        for d in _divisors(n):
            if (n // d) % 2 == 1:
                options.append(DivisorOption(2 * n // d, d, d, 0, "d | n, n/d odd"))
        for d in _divisors(n - 1):
            if ((n - 1) // d) % 2 == 1 and d < n - 1:
                options.append(DivisorOption(2 * (n - 1) // d, d, d + 1, 0, "d | n-1, (n-1)/d odd"))
    elif type_tag == GroupType.C:
        for d in _divisors(n):
            options.append(DivisorOption(2 * n // d, d, 0, 0, "d | n"))
    elif type_tag == GroupType.B:
        for d in _divisors(n):
            if d % 2 == 0:
                options.append(DivisorOption(2 * n // d, d, d, d + 1, "d | n, d even"))
            else:
                options.append(DivisorOption(2 * n // d, d, d + 1, d, "d | n, d odd"))
    elif type_tag in (GroupType.D, GroupType.D_OUTER):
        split = type_tag == GroupType.D
        for d in _divisors(n):
            if (d % 2 == 0) == split:
                options.append(DivisorOption(2 * n // d, d, d, d, "d | n"))
        for d in _divisors(n - 1):
            if (d % 2 == 1) == split:
                option = DivisorOption(2 * (n - 1) // d, d, d + 1, d + 1, "d | n-1")
                # at m = 2 both rules give M_0 = M_1 of dim n; keep the d | n form
                if option.m == 2 and any(o.m == 2 for o in options):
                    continue
                options.append(option)
    else:
        raise ClassificationError(f"{type_tag.value} is not a classical type", rule="classical types only")
    return sorted(options, key=lambda o: (o.d, -o.m))


def _blocks(type_tag: GroupType, option: DivisorOption, n: int) -> (int, List[BlockDim]):
    m, d = option.m, option.d
    family = type_tag.family
    if family == "split":
        return 0, [BlockDim(label=i, dim=1) for i in range(1, n + 1)]
    if family == "unitary":
        ell = (m // 2 - 1) // 2
        return ell, [
            BlockDim(label=i, dim=option.center_dim if i == 0 else d) for i in range(-ell, ell + 1)
        ]
    if family == "symplectic":
        return m // 2, [BlockDim(label=i, dim=d) for i in range(1, m + 1)]
    ell = m // 2
    blocks = []
    for i in range(m):
        if i == 0:
            dim = option.center_dim
        elif i == ell:
            dim = option.top_dim
        else:
            dim = d
        blocks.append(BlockDim(label=i, dim=dim))
    return ell, blocks


def make_datum(type_tag, n: int, m: int, d: Optional[int] = None) -> GroupDatum:
    """
    Validate (type, n, m, d) and build the GroupDatum.

    Args:
        type_tag: GroupType or its string value
        n: Rank parameter
        m: Regular elliptic number
        d: Divisor parameter; derived from m when omitted

    Returns:
        The datum with block dimensions

    Raises:
        ClassificationError: Naming the violated divisor or range rule
    """
    type_tag = GroupType(type_tag)
    if not type_tag.is_classical:
        raise ClassificationError(
            f"no sum engine for exceptional type {type_tag.value}", rule="classical types only"
        )
    if n < MIN_N.get(type_tag, 1):
        raise ClassificationError(
            f"type {type_tag.value} is supported for n >= {MIN_N[type_tag]}, got n={n}",
            rule=f"n >= {MIN_N[type_tag]}",
        )
    rule = RULES[type_tag]
    matches = [o for o in divisor_options(type_tag, n) if o.m == m and (d is None or o.d == d)]
    if not matches:
        raise ClassificationError(f"{rule} (got type {type_tag.value}, n={n}, m={m}, d={d})", rule=rule)
    option = matches[0]
    ell, blocks = _blocks(type_tag, option, n)
    datum = GroupDatum(
        type_tag=type_tag, n=n, m=option.m, d=option.d, ell=ell, blocks=blocks, rule=option.rule
    )
    expected = {"split": n, "unitary": n, "symplectic": 2 * n}.get(
        type_tag.family, 2 * n + 1 if type_tag == GroupType.B else 2 * n
    )
    if datum.dim != expected:
        raise ClassificationError(f"block dimensions {blocks} do not add up to {expected}", rule=rule)
    return datum
