"""
Consistency identities between the monodromy table and Levi data, and the
rows of the reconstructed tables.
"""

import logging
from typing import List, Optional

from src.core.errors import InvalidInputError
from src.core.models import GroupType, VerificationStatus
from src.quadform.datum import MIN_N
from src.weylcomb.elliptic import EXCEPTIONAL_TABLE, check_rank, regular_elliptic_numbers, root_count
from src.weylcomb.levi import parahoric_datum
from src.weylcomb.models import AmbientType, ConsistencyReport, ConsistencyRow, LeviKind, TableRow, UnipotentClass
from src.weylcomb.monodromy import unipotent_monodromy_class
from src.weylcomb.springer import (
    ORACLE_MAX_SIZE,
    parity_violations,
    springer_fiber_dim,
    springer_fiber_dim_oracle,
)


logger = logging.getLogger("klspark.weylcomb")


def _half_levi_roots(datum) -> int:
    total = 0
    for factor in datum.levi:
        if factor.kind == LeviKind.GL:
            total += factor.size * factor.size - factor.size
        elif factor.kind == LeviKind.SO:
            total += factor.size * (factor.size - 1) // 2 - factor.size // 2
    return total // 2


def check_row(type_tag, n: int, m: int, d: int, partition: Optional[List[int]] = None, oracle: bool = True) -> ConsistencyRow:
    """
    The identities of one (m, d): partition validity, dim B_u = l(w_P) =
    #Psi(L_P)/2 and dim L_P * m = #Phi. A given partition replaces u_m.
    """
    type_tag = GroupType(type_tag)
    datum = parahoric_datum(type_tag, n, m, d)
    unipotent = unipotent_monodromy_class(type_tag, n, m, d)
    if partition is not None:
        unipotent = unipotent.model_copy(update={"partition": sorted(partition, reverse=True)})
    failures: List[str] = []
    kind = AmbientType(unipotent.ambient)
    if sum(unipotent.partition) != unipotent.ambient_size:
        failures.append(f"partition size {sum(unipotent.partition)} != {unipotent.ambient_size}")
    problems = parity_violations(kind, unipotent.partition)
    failures += [f"parity: {p}" for p in problems]

    springer = oracle_dim = None
    if not problems:
        springer = springer_fiber_dim(unipotent)
        if oracle and sum(unipotent.partition) <= ORACLE_MAX_SIZE:
            oracle_dim = springer_fiber_dim_oracle(unipotent)
            if oracle_dim != springer:
                failures.append(f"centralizer oracle gives dim B_u = {oracle_dim}, formula {springer}")
        if springer != datum.levi_length:
            failures.append(f"dim B_u = {springer} != l(w_P) = {datum.levi_length}")
    half = _half_levi_roots(datum)
    if half != datum.levi_length:
        failures.append(f"#Psi(L_P)/2 = {half} != l(w_P) = {datum.levi_length}")
    roots = datum.root_count
    if datum.levi_dim * datum.m != roots:
        failures.append(f"dim L_P * m = {datum.levi_dim * datum.m} != #Phi = {roots}")
    return ConsistencyRow(
        m=datum.m,
        d=datum.d,
        partition=unipotent.partition,
        springer_dim=springer,
        oracle_dim=oracle_dim,
        levi_length=datum.levi_length,
        half_levi_roots=half,
        levi_dim=datum.levi_dim,
        roots_over_m=roots // datum.m if roots % datum.m == 0 else None,
        failures=failures,
    )


def consistency_check(type_tag, n: int, oracle: bool = True) -> ConsistencyReport:
    """
    Run the identities over every (m, d) of a classical type; failures are
    report entries, never exceptions.

    Raises:
        InvalidInputError: For exceptional types
        ClassificationError: For ranks outside the supported range
    """
    type_tag = GroupType(type_tag)
    if not type_tag.is_classical:
        raise InvalidInputError(f"consistency identities are computed for classical types, got {type_tag.value}")
    check_rank(type_tag, n)
    rows = [check_row(type_tag, n, m, d, oracle=oracle) for m, d in regular_elliptic_numbers(type_tag, n)]
    failed = [r for r in rows if not r.passed]
    for row in failed:
        logger.warning(f"{type_tag.value} n={n} m={row.m} d={row.d}: {'; '.join(row.failures)}")
    status = VerificationStatus.FAIL if failed else VerificationStatus.PASS
    return ConsistencyReport(type_tag=type_tag, n=n, rows=rows, status=status)


def classical_table_rows(type_tag, n_max: int, oracle: bool = False) -> List[TableRow]:
    """Table rows for n from the smallest supported rank up to n_max."""
    type_tag = GroupType(type_tag)
    rows: List[TableRow] = []
    for n in range(MIN_N.get(type_tag, 1), n_max + 1):
        check_rank(type_tag, n)
        for m, d in regular_elliptic_numbers(type_tag, n):
            row = check_row(type_tag, n, m, d, oracle=oracle)
            unipotent: UnipotentClass = unipotent_monodromy_class(type_tag, n, m, d)
            rows.append(TableRow(
                type_tag=type_tag,
                n=n,
                m=m,
                d=d,
                unipotent=unipotent.partition_text(),
                ambient=f"{unipotent.ambient}({unipotent.ambient_size})",
                springer_dim=row.springer_dim,
                levi_length=row.levi_length,
                roots_over_m=row.roots_over_m,
                consistent=row.passed,
            ))
    return rows


def exceptional_table_rows(type_tag) -> List[TableRow]:
    type_tag = GroupType(type_tag)
    ambient_label, entries = EXCEPTIONAL_TABLE[type_tag]
    roots = root_count(type_tag)
    return [
        TableRow(
            type_tag=type_tag,
            m=m,
            unipotent=label,
            ambient=ambient_label,
            roots_over_m=roots // m if roots % m == 0 else None,
        )
        for m, label in entries
    ]


def table_rows(type_tag, n_max: Optional[int] = None, oracle: bool = False) -> List[TableRow]:
    """
    Raises:
        InvalidInputError: If a classical type comes without n_max
    """
    type_tag = GroupType(type_tag)
    if not type_tag.is_classical:
        return exceptional_table_rows(type_tag)
    if n_max is None:
        raise InvalidInputError(f"type {type_tag.value} needs --n-max")
    return classical_table_rows(type_tag, n_max, oracle=oracle)
