"""
Levi factors of the admissible parahorics of classical groups.

L_P is a product of GL(M_i) over the non-self-paired blocks with SO factors
on the self-paired ones; for split A it is the torus of SL_n.
"""

from typing import List

from src.core.errors import ClassificationError
from src.core.models import GroupType
from src.quadform.datum import make_datum
from src.quadform.models import GroupDatum
from src.weylcomb.elliptic import root_count
from src.weylcomb.models import LeviFactor, LeviKind, ParahoricDatum


def levi_factors(datum: GroupDatum) -> List[LeviFactor]:
    family = datum.family
    ell = datum.ell
    if family == "split":
        return [LeviFactor(kind=LeviKind.TORUS, size=datum.n - 1)]
    if family == "unitary":
        factors = [LeviFactor(kind=LeviKind.GL, size=datum.block_dim(i), block=i) for i in range(1, ell + 1)]
        return factors + [LeviFactor(kind=LeviKind.SO, size=datum.block_dim(0), block=0)]
    if family == "symplectic":
        return [LeviFactor(kind=LeviKind.GL, size=datum.block_dim(i), block=i) for i in range(1, ell + 1)]
    factors = [LeviFactor(kind=LeviKind.SO, size=datum.block_dim(0), block=0)]
    factors += [LeviFactor(kind=LeviKind.GL, size=datum.block_dim(i), block=i) for i in range(1, ell)]
    factors.append(LeviFactor(kind=LeviKind.SO, size=datum.block_dim(ell), block=ell))
    return factors


def parahoric_datum(type_tag, n: int, m: int, d: int = None) -> ParahoricDatum:
    """
    P_m for a classical type with its Levi description.

    Raises:
        ClassificationError: If (m, d) is not admissible
    """
    type_tag = GroupType(type_tag)
    if not type_tag.is_classical:
        raise ClassificationError(f"no Levi description for exceptional type {type_tag.value}", rule="classical types only")
    datum = make_datum(type_tag, n, m, d)
    return ParahoricDatum(
        type_tag=type_tag,
        n=n,
        m=datum.m,
        d=datum.d,
        levi=levi_factors(datum),
        root_count=root_count(type_tag, n),
    )


def levi_length(datum: ParahoricDatum) -> int:
    """l(w_P): the number of positive roots of L_P."""
    return datum.levi_length
