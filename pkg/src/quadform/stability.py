"""
Stability of functionals and the canonical stable family.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from src.core.errors import InapplicableError, InvalidInputError
from src.cyclofield import linalg
from src.cyclofield.field import Field
from src.quadform.models import GroupDatum, StabilityResult, StabilityVerdict, StableFunctional
from src.quadform.pencil import pencil_degeneracy
from src.quadform.space import GradedQuadraticSpace


MAX_SEARCH_ATTEMPTS = 4000

logger = logging.getLogger("klspark.stability")


def expected_shapes(datum: GroupDatum) -> Tuple[List[Tuple[int, int]], List[int]]:
    """(map shapes, form sizes) of a functional for this datum."""
    family = datum.family
    ell = datum.ell
    dim = datum.block_dim
    if family == "split":
        return [(1, 1)] * datum.n, []
    if family == "unitary":
        return [(dim(i + 1), dim(i)) for i in range(ell)], [dim(ell)]
    if family == "symplectic":
        return [(datum.d, datum.d)] * (ell - 1), [datum.d, datum.d]
    return [(dim(i + 1), dim(i)) for i in range(ell)], []


def validate_shapes(datum: GroupDatum, phi: StableFunctional) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """
    Check block shapes and form symmetry.

    Raises:
        InvalidInputError: On any shape mismatch or an asymmetric form
    """
    map_shapes, form_sizes = expected_shapes(datum)
    maps = phi.map_arrays()
    forms = phi.form_arrays()
    if len(maps) != len(map_shapes):
        raise InvalidInputError(f"expected {len(map_shapes)} block maps, got {len(maps)}")
    if len(forms) != len(form_sizes):
        raise InvalidInputError(f"expected {len(form_sizes)} quadratic forms, got {len(forms)}")
    for k, (matrix, shape) in enumerate(zip(maps, map_shapes)):
        if matrix.shape != shape:
            raise InvalidInputError(f"map {k} has shape {matrix.shape}, expected {shape}")
    for k, (form, size) in enumerate(zip(forms, form_sizes)):
        if form.shape != (size, size):
            raise InvalidInputError(f"form {k} has shape {form.shape}, expected {(size, size)}")
        if not linalg.is_symmetric(form):
            raise InvalidInputError(f"form {k} is not symmetric")
    return maps, forms


def map_from_form(field: Field, form: np.ndarray, omega_block: np.ndarray) -> np.ndarray:
    """The map phi with omega(phi x, y) = x^T F y, given the (target, source) block of omega."""
    return linalg.matmul(field, linalg.inverse(field, omega_block).T, form)


def chain(field: Field, maps: List[np.ndarray], size: int) -> np.ndarray:
    """maps[-1] ... maps[0], the identity of the given size when empty."""
    product = linalg.identity(size)
    for matrix in maps:
        product = linalg.matmul(field, matrix, product)
    return product


def _has_max_rank(field: Field, matrix: np.ndarray) -> bool:
    return linalg.rank(field, matrix) == min(matrix.shape)


def _pencil_verdict(field: Field, base: np.ndarray, other: np.ndarray, nondegenerate: Optional[bool]) -> StabilityResult:
    pencil = pencil_degeneracy(field, base, other)
    if pencil.general_position:
        return StabilityResult(verdict=StabilityVerdict.STABLE, pencil=pencil, phi_ell_nondegenerate=nondegenerate)
    if not pencil.squarefree:
        reason = "pencil has repeated degeneracy point"
    else:
        reason = "pencil degenerates at fewer points than the dimension"
    return StabilityResult.unstable(reason, pencil=pencil, phi_ell_nondegenerate=nondegenerate)


def is_stable(datum: GroupDatum, space: GradedQuadraticSpace, phi: StableFunctional) -> StabilityResult:
    """
    Decide stability of phi.

    Maps must have maximal rank (isomorphisms for symplectic types), and the
    pencil of the base form with the transported top form must be in general
    position.

    Raises:
        InvalidInputError: On shape mismatch
    """
    field = space.field
    maps, forms = validate_shapes(datum, phi)
    family = datum.family

    if family == "split":
        if all(int(m[0, 0]) != 0 for m in maps):
            return StabilityResult(verdict=StabilityVerdict.STABLE)
        return StabilityResult.unstable("rank")

    if any(not _has_max_rank(field, m) for m in maps):
        return StabilityResult.unstable("rank")

    if family == "unitary":
        top = forms[0]
        transport = chain(field, maps, datum.block_dim(0))
        pulled = linalg.congruence(field, top, transport)
        nondegenerate = linalg.det(field, top) != 0
        return _pencil_verdict(field, space.block(0, 0), pulled, nondegenerate)

    if family == "symplectic":
        m, ell = datum.m, datum.ell
        form_ell, form_m = forms
        if linalg.det(field, form_ell) == 0 or linalg.det(field, form_m) == 0:
            return StabilityResult.unstable("rank")
        phi_m = map_from_form(field, form_m, space.block(1, m))
        transport = chain(field, [phi_m] + maps, datum.d)
        pulled = linalg.congruence(field, form_ell, transport)
        return _pencil_verdict(field, form_m, pulled, True)

    ell = datum.ell
    transport = chain(field, maps, datum.block_dim(0))
    pulled = linalg.congruence(field, space.block(ell, ell), transport)
    return _pencil_verdict(field, space.block(0, 0), pulled, None)


def _diagonal(field: Field, values: List[int]) -> np.ndarray:
    return np.diag(np.array([field.from_int(v) for v in values], dtype=np.int64))


def _canonical_candidate(datum: GroupDatum, field: Field, degenerate: bool) -> StableFunctional:
    map_shapes, form_sizes = expected_shapes(datum)
    family = datum.family
    maps = [linalg.rect_identity(*shape) for shape in map_shapes]
    if family == "split":
        return StableFunctional.from_arrays(maps, [], source="canonical")
    if family == "unitary":
        k = form_sizes[0]
        values = list(range(k)) if degenerate else list(range(1, k + 1))
        return StableFunctional.from_arrays(maps, [_diagonal(field, values)], source="canonical")
    if family == "symplectic":
        d = datum.d
        return StableFunctional.from_arrays(
            maps, [_diagonal(field, list(range(1, d + 1))), linalg.identity(d)], source="canonical"
        )
    return StableFunctional.from_arrays(maps, [], source="canonical")


def _random_full_rank(field: Field, rng: np.random.Generator, shape: Tuple[int, int]) -> np.ndarray:
    while True:
        matrix = field.random_elements(rng, shape)
        if min(shape) == 0 or _has_max_rank(field, matrix):
            return matrix


def _random_symmetric(field: Field, rng: np.random.Generator, size: int) -> np.ndarray:
    upper = np.triu(field.random_elements(rng, (size, size)))
    return field.add(upper, np.triu(upper, 1).T)


def _meets_request(datum: GroupDatum, result: StabilityResult, degenerate: bool) -> bool:
    if not result.stable:
        return False
    if datum.family != "unitary":
        return True
    return result.phi_ell_nondegenerate != degenerate


def canonical_functional(
    datum: GroupDatum, space: GradedQuadraticSpace, degenerate: bool = False, seed: int = 0
) -> StableFunctional:
    """
    The canonical stable functional, or a seeded random stable one when the
    diagonal family is not stable over this field.

    Args:
        datum: Group datum
        space: Space built for the datum
        degenerate: Request a degenerate phi_l (unitary only)
        seed: Seed of the fallback search

    Raises:
        InvalidInputError: If a degenerate functional is requested for a non-unitary type
        InapplicableError: If no stable functional was found
    """
    if degenerate and datum.family != "unitary":
        raise InvalidInputError("a degenerate phi_l is only defined for unitary types")
    field = space.field
    candidate = _canonical_candidate(datum, field, degenerate)
    if _meets_request(datum, is_stable(datum, space, candidate), degenerate):
        return candidate

    logger.info(f"Diagonal functional is not stable over F_{field.q}; searching with seed {seed}")
    rng = np.random.default_rng(seed)
    map_shapes, form_sizes = expected_shapes(datum)
    for _ in range(MAX_SEARCH_ATTEMPTS):
        maps = [_random_full_rank(field, rng, shape) for shape in map_shapes]
        forms = [_random_symmetric(field, rng, size) for size in form_sizes]
        phi = StableFunctional.from_arrays(maps, forms, source="search")
        if _meets_request(datum, is_stable(datum, space, phi), degenerate):
            return phi
    kind = "degenerate" if degenerate else "nondegenerate"
    raise InapplicableError(f"no {kind} stable functional found over F_{field.q} after {MAX_SEARCH_ATTEMPTS} attempts")


def expected_euler_characteristic(datum: GroupDatum, space: GradedQuadraticSpace, phi: StableFunctional) -> int:
    """
    -chi_c of the unitary sum sheaf predicted from stability data: d when phi_l
    is nondegenerate, d - 1 otherwise.

    Raises:
        InapplicableError: For non-unitary data or unstable phi
    """
    if datum.family != "unitary":
        raise InapplicableError("Euler characteristic prediction is available for unitary types only")
    result = is_stable(datum, space, phi)
    if not result.stable:
        raise InapplicableError(f"phi is not stable: {result.reason}")
    return datum.d if result.phi_ell_nondegenerate else datum.d - 1


def embed_functional(phi: StableFunctional, extension: Field) -> StableFunctional:
    """phi with its entries mapped into an extension field."""
    embedding = extension.embedding
    return StableFunctional.from_arrays(
        [embedding.embed(m) for m in phi.map_arrays()],
        [embedding.embed(f) for f in phi.form_arrays()],
        source=phi.source,
    )
