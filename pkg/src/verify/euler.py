"""
Euler characteristics from Frobenius power sums.

N_k = -(-1)^w sum over t in F_{q^k}^x of S_k(t) is the trace of Frob^k on
H^1_c when the other compactly supported cohomology groups vanish, so the
number of exponentials in (N_k), counted with multiplicity, is -chi_c. The
Hankel matrix of the normalized power sums has one dimension per distinct
eigenvalue; the eigenvalues and their multiplicities (the amplitudes) come
from a shift-invariance (ESPRIT) fit.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg as sla

from src.core.config import get_settings
from src.core.errors import BudgetExceeded, InapplicableError, InvalidInputError
from src.core.models import VerificationStatus
from src.cyclofield.characters import AdditiveCharacter
from src.cyclofield.cyclosum import CycloSum
from src.cyclofield.field import MAX_FIELD_ORDER, extend_field
from src.quadform.models import GroupDatum, StableFunctional
from src.quadform.projective import projective_size
from src.quadform.space import GradedQuadraticSpace
from src.quadform.stability import embed_functional, expected_euler_characteristic
from src.sum_engine.engine import TraceEngine
from src.sum_engine.models import CharacterSpec
from src.verify.models import AMPLITUDE_TOLERANCE, HANKEL_GAP, HANKEL_TOLERANCE, PronyEstimate


logger = logging.getLogger("klspark.verify")


def check_level_budget(order: int, cost: int, spent: int, budget: int) -> None:
    """Raise BudgetExceeded when a level cannot be enumerated within the budget."""
    if order > MAX_FIELD_ORDER:
        raise BudgetExceeded(f"F_{order} is larger than the supported field order {MAX_FIELD_ORDER}")
    if spent + cost > budget:
        raise BudgetExceeded(f"F_{order} with {cost} points is over the budget ({spent} of {budget} spent)")


def level_cost(datum: GroupDatum, q: int) -> int:
    """Raw domain points enumerated over F_q."""
    family = datum.family
    if family == "symplectic":
        return 1 + (q - 1) * projective_size(q, datum.dim)
    if family == "split":
        return (q - 1) ** (datum.n - 1)
    return projective_size(q, datum.dim)


def power_sum(
    datum: GroupDatum,
    space: GradedQuadraticSpace,
    phi: StableFunctional,
    chi: CharacterSpec,
    psi: AdditiveCharacter,
    k: int,
    threads: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> complex:
    """N_k over the degree-k extension, with chi and psi lifted through norm and trace."""
    extension = extend_field(space.field, k)
    embedding = extension.embedding
    lifted_chi = CharacterSpec(exponents=[embedding.lift_exponent(r) for r in chi.exponents])
    engine = TraceEngine(
        datum,
        space.extend(extension),
        embed_functional(phi, extension),
        lifted_chi,
        psi.lift(extension),
        threads=threads,
        chunk_size=chunk_size,
    )
    total = engine.t_sum()
    value = total.to_complex() if isinstance(total, CycloSum) else complex(total)
    return -((-1) ** datum.weight) * value


def hankel_matrix(signal: np.ndarray) -> np.ndarray:
    """floor(K/2) rows over signal[0..K-1]."""
    rows = len(signal) // 2
    return sla.hankel(signal[:rows], signal[rows - 1:])


def numerical_rank(singular_values: np.ndarray, tolerance: float = HANKEL_TOLERANCE) -> Tuple[int, Optional[float]]:
    """(rank, gap) with singular values below tolerance * s_1 counted as zero."""
    if singular_values.size == 0 or singular_values[0] == 0:
        return 0, None
    floor = tolerance * singular_values[0]
    rank = int(np.sum(singular_values > floor))
    if rank == singular_values.size:
        return rank, None
    return rank, float(singular_values[rank - 1] / max(singular_values[rank], floor))


def prony_fit(signal: np.ndarray, rank: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Frequencies z_j and amplitudes a_j with signal[n] = sum_j a_j z_j^(n+1).

    The frequencies are the eigenvalues of the shift between the leading
    right singular vectors of the Hankel matrix.
    """
    if rank == 0:
        return np.zeros(0, dtype=np.complex128), np.zeros(0, dtype=np.complex128)
    _, _, vh = sla.svd(hankel_matrix(signal))
    w = vh[:rank, :]
    shift = sla.pinv(w[:, :-1].T) @ w[:, 1:].T
    frequencies = np.linalg.eigvals(shift)
    exponents = np.arange(1, len(signal) + 1)[:, None]
    vandermonde = frequencies[None, :] ** exponents
    amplitudes = sla.lstsq(vandermonde, signal)[0]
    order = np.argsort(-np.abs(frequencies))
    return frequencies[order], amplitudes[order]


def multiplicity_count(amplitudes: np.ndarray, tolerance: float = AMPLITUDE_TOLERANCE) -> Optional[int]:
    """Sum of the amplitudes, or None unless each is within tolerance of a positive integer."""
    amplitudes = np.asarray(amplitudes, dtype=np.complex128)
    rounded = np.rint(amplitudes.real)
    if np.any(rounded < 1) or np.any(np.abs(amplitudes - rounded) > tolerance):
        return None
    return int(rounded.sum())


def _pairs(values: np.ndarray) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in values]


def euler_characteristic_estimate(
    datum: GroupDatum,
    space: GradedQuadraticSpace,
    phi: StableFunctional,
    chi: Optional[CharacterSpec] = None,
    psi: Optional[AdditiveCharacter] = None,
    k_max: Optional[int] = None,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> PronyEstimate:
    """
    Estimate -chi_c of the unitary sum sheaf from N_1..N_k_max.

    Levels whose field is too large or whose cumulative enumeration would
    pass the point budget are skipped and the result is marked partial.

    Raises:
        InapplicableError: For non-unitary data or unstable phi
        InvalidInputError: If k_max < 2(d + 1)
    """
    if datum.family != "unitary":
        raise InapplicableError("Euler characteristic estimates are implemented for unitary types")
    expected = expected_euler_characteristic(datum, space, phi)
    minimum = 2 * (datum.d + 1)
    k_max = minimum if k_max is None else int(k_max)
    if k_max < minimum:
        raise InvalidInputError(f"k_max must be at least 2(d + 1) = {minimum}, got {k_max}")
    budget = budget or get_settings().euler_budget
    chi = chi if chi is not None else CharacterSpec.trivial(datum.chi_arity)
    psi = psi if psi is not None else AdditiveCharacter(space.field, 1)
    q = space.field.q

    sums: List[complex] = []
    spent = 0
    for k in range(1, k_max + 1):
        order = q ** k
        cost = level_cost(datum, order)
        try:
            check_level_budget(order, cost, spent, budget)
        except BudgetExceeded as e:
            logger.warning(f"Stopping at k={k - 1}: {e.message}")
            break
        sums.append(power_sum(datum, space, phi, chi, psi, k, threads, chunk_size))
        spent += cost
        logger.info(f"N_{k} over F_{order}: {sums[-1]:.6g}")

    scale = float(q) ** ((datum.weight + 1) / 2)
    signal = np.array([s / scale ** (k + 1) for k, s in enumerate(sums)], dtype=np.complex128)
    fitted = signal.size >= 2
    singular_values = sla.svdvals(hankel_matrix(signal)) if fitted else np.zeros(0)
    rank, gap = numerical_rank(singular_values)
    frequencies, amplitudes = prony_fit(signal, rank) if fitted else (np.zeros(0), np.zeros(0))
    count = multiplicity_count(amplitudes) if fitted else None
    confident = gap is not None and gap >= HANKEL_GAP

    if len(sums) < k_max:
        status = VerificationStatus.PARTIAL
    elif not confident or count is None:
        status = VerificationStatus.INCONCLUSIVE
    else:
        status = VerificationStatus.PASS if count == expected else VerificationStatus.FAIL
    logger.info(f"Exponential count {count} (Hankel rank {rank}, expected {expected}), gap {gap}, status {status.value}")
    return PronyEstimate(
        power_sums=_pairs(np.array(sums, dtype=np.complex128)),
        normalization=scale,
        k_max=k_max,
        k_achieved=len(sums),
        singular_values=[float(s) for s in singular_values],
        estimate=count,
        hankel_rank=rank if fitted else None,
        gap=gap,
        confident=confident,
        frequencies=_pairs(frequencies),
        amplitudes=_pairs(amplitudes),
        expected=expected,
        status=status,
    )
