"""
Springer fibre dimensions of classical unipotent classes.

dim B_u = (dim Z(u) - rank) / 2 with the centralizer dimension read off the
dual partition. `centralizer_dimension_oracle` recomputes dim Z(u) from an
explicit nilpotent matrix by solving [X, u] = 0 inside the Lie algebra over QQ.
"""

from collections import Counter
from typing import List, Optional, Tuple

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from src.core.errors import InvalidInputError
from src.weylcomb.models import AmbientType, UnipotentClass


ORACLE_MAX_SIZE = 10


def dual_partition(partition: List[int]) -> List[int]:
    if not partition:
        return []
    return [sum(1 for p in partition if p >= i) for i in range(1, max(partition) + 1)]


def parity_violations(kind: AmbientType, partition: List[int]) -> List[str]:
    """Reasons the partition does not label a nilpotent class of the ambient type."""
    problems = []
    size = sum(partition)
    counts = Counter(partition)
    if any(p <= 0 for p in partition):
        problems.append("parts must be positive")
    if kind == AmbientType.C:
        if size % 2:
            problems.append(f"sp needs an even size, got {size}")
        problems += [f"odd part {p} has odd multiplicity {c}" for p, c in sorted(counts.items()) if p % 2 and c % 2]
    elif kind in (AmbientType.B, AmbientType.D):
        if kind == AmbientType.B and size % 2 == 0:
            problems.append(f"so of type B needs an odd size, got {size}")
        if kind == AmbientType.D and size % 2:
            problems.append(f"so of type D needs an even size, got {size}")
        problems += [f"even part {p} has odd multiplicity {c}" for p, c in sorted(counts.items()) if p % 2 == 0 and c % 2]
    return problems


def rank_of(kind: AmbientType, size: int) -> int:
    return size if kind == AmbientType.A else size // 2


def centralizer_dimension(kind: AmbientType, partition: List[int]) -> int:
    """dim Z(u) in gl, sp or so from the partition."""
    squares = sum(k * k for k in dual_partition(partition))
    if kind == AmbientType.A:
        return squares
    odd = sum(1 for p in partition if p % 2)
    if kind == AmbientType.C:
        return (squares + odd) // 2
    return (squares - odd) // 2


def springer_fiber_dim(unipotent: UnipotentClass) -> int:
    """
    dim B_u of a classical class.

    Raises:
        InvalidInputError: For exceptional classes or partitions breaking the parity rules
    """
    if unipotent.partition is None:
        raise InvalidInputError(f"no Springer dimension formula for {unipotent.label}")
    kind = AmbientType(unipotent.ambient)
    partition = list(unipotent.partition)
    problems = parity_violations(kind, partition)
    if problems:
        raise InvalidInputError(f"partition {partition} is not a class of type {kind.value}: {'; '.join(problems)}")
    return (centralizer_dimension(kind, partition) - rank_of(kind, sum(partition))) // 2


def _jordan_block(k: int) -> np.ndarray:
    block = np.zeros((k, k), dtype=np.int64)
    for a in range(k - 1):
        block[a, a + 1] = 1
    return block


def _single_form(k: int) -> np.ndarray:
    """Invariant form of one Jordan block: symmetric for odd k, alternating for even k."""
    form = np.zeros((k, k), dtype=np.int64)
    for a in range(k):
        form[a, k - 1 - a] = (-1) ** (a + 1)
    return form


def _direct_sum(blocks: List[np.ndarray]) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size), dtype=np.int64)
    start = 0
    for b in blocks:
        k = b.shape[0]
        out[start:start + k, start:start + k] = b
        start += k
    return out


def nilpotent_in_normal_form(kind: AmbientType, partition: List[int]) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    A nilpotent N of Jordan type `partition` and the form J with N^T J + J N = 0.

    Blocks of the good parity carry their own form; the others are paired
    with their duals. J is None for type A.
    """
    if kind == AmbientType.A:
        return _direct_sum([_jordan_block(k) for k in partition]), None
    epsilon = -1 if kind == AmbientType.C else 1
    single_parity = 0 if kind == AmbientType.C else 1
    nilpotents, forms = [], []
    counts = Counter(partition)
    for k in sorted(counts, reverse=True):
        c = counts[k]
        if k % 2 == single_parity:
            for _ in range(c):
                nilpotents.append(_jordan_block(k))
                forms.append(_single_form(k))
        else:
            for _ in range(c // 2):
                block = _jordan_block(k)
                pair = np.zeros((2 * k, 2 * k), dtype=np.int64)
                pair[:k, :k] = block
                pair[k:, k:] = -block.T
                form = np.zeros((2 * k, 2 * k), dtype=np.int64)
                form[:k, k:] = np.eye(k, dtype=np.int64)
                form[k:, :k] = epsilon * np.eye(k, dtype=np.int64)
                nilpotents.append(pair)
                forms.append(form)
    return _direct_sum(nilpotents), _direct_sum(forms)


def centralizer_dimension_oracle(kind: AmbientType, partition: List[int]) -> Optional[int]:
    """
    dim {X in g : XN = NX} by exact linear algebra, or None above the size limit.

    Raises:
        InvalidInputError: For partitions breaking the parity rules
    """
    problems = parity_violations(kind, partition)
    if problems:
        raise InvalidInputError("; ".join(problems))
    size = sum(partition)
    if size > ORACLE_MAX_SIZE:
        return None
    nilpotent, form = nilpotent_in_normal_form(kind, partition)
    unknowns = size * size
    rows = []
    for i in range(size):
        for j in range(size):
            row = [0] * unknowns
            for k in range(size):
                row[i * size + k] += int(nilpotent[k, j])
                row[k * size + j] -= int(nilpotent[i, k])
            rows.append(row)
            if form is not None:
                row = [0] * unknowns
                for k in range(size):
                    row[k * size + i] += int(form[k, j])
                    row[k * size + j] += int(form[i, k])
                rows.append(row)
    matrix = DomainMatrix([[QQ(v) for v in row] for row in rows], (len(rows), unknowns), QQ)
    return unknowns - matrix.rank()


def springer_fiber_dim_oracle(unipotent: UnipotentClass) -> Optional[int]:
    """dim B_u through the matrix centralizer, None above the size limit."""
    kind = AmbientType(unipotent.ambient)
    centralizer = centralizer_dimension_oracle(kind, list(unipotent.partition or []))
    if centralizer is None:
        return None
    return (centralizer - rank_of(kind, sum(unipotent.partition))) // 2
