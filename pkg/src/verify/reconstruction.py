"""
Reconstruction of the matrices (A, B) behind a domain point.

A point determines a rank-one C with image [v] and R = I - C = A^-1 B, where
A^-1 is block unipotent upper triangular and B block lower triangular in the
label order of the basis. The factors are recovered by a block UL
elimination and then checked against the group conditions, against f'
(determinants of the diagonal blocks of B) and against f'' paired with phi
(the superdiagonal blocks A_(i,i+1)).
"""

import logging
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.core.errors import DegenerateInputError, InapplicableError
from src.core.models import VerificationStatus
from src.cyclofield import linalg
from src.cyclofield.field import Field
from src.quadform.models import GroupDatum, StableFunctional
from src.quadform.space import GradedQuadraticSpace
from src.quadform.stability import expected_shapes, map_from_form
from src.sum_engine.engine import enumerate_domain, f_phi_eval, f_prime_eval
from src.sum_engine.models import DomainPoint
from src.verify.models import ReconstructionReport, ReconstructionResult


logger = logging.getLogger("klspark.verify")

Blocks = Dict[Tuple[int, int], np.ndarray]


class BlockMatrix:
    """A square matrix over F_q addressed by block labels."""

    def __init__(self, space: GradedQuadraticSpace, matrix: np.ndarray):
        self.space = space
        self.field = space.field
        self.matrix = np.asarray(matrix, dtype=np.int64)

    def __getitem__(self, key: Tuple[int, int]) -> np.ndarray:
        i, j = key
        return self.matrix[self.space.slices[i], self.space.slices[j]]

    def __setitem__(self, key: Tuple[int, int], value: np.ndarray) -> None:
        i, j = key
        self.matrix[self.space.slices[i], self.space.slices[j]] = value

    def sub(self, labels: List[int]) -> np.ndarray:
        idx = np.concatenate([np.arange(self.space.dim)[self.space.slices[l]] for l in labels])
        return self.matrix[np.ix_(idx, idx)]


def rank_one_part(datum: GroupDatum, space: GradedQuadraticSpace, point: DomainPoint) -> np.ndarray:
    """
    C with R = I - C.

    unitary: C x = (x, v)/q(v) v; orthogonal: C x = (x, v)/q_[1,m-1](v) v;
    symplectic: C x = c omega(x, w) w.
    """
    f = space.field
    v = np.array(point.vector, dtype=np.int64)
    dual = f.matvec(space.gram, v[None, :])[0]
    family = datum.family
    if family == "symplectic":
        return f.mul(linalg.outer(f, v, dual), int(point.scalar))
    if family == "unitary":
        denominator = int(space.quadratic(v[None, :])[0])
    else:
        labels = [l for l in datum.labels if l != 0]
        denominator = int(space.quadratic(v[None, :], labels)[0])
    if denominator == 0:
        raise DegenerateInputError(f"point {point.vector} lies on a removed quadric")
    return f.mul(linalg.outer(f, v, dual), int(f.inv(denominator)))


def block_ul(space: GradedQuadraticSpace, matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    R = U L with U block unipotent upper triangular and L block lower triangular.

    Raises:
        DegenerateInputError: If a pivot block is singular
    """
    f = space.field
    labels = space.datum.labels
    work = BlockMatrix(space, np.array(matrix, dtype=np.int64, copy=True))
    upper = BlockMatrix(space, linalg.identity(space.dim))
    lower = BlockMatrix(space, np.zeros_like(work.matrix))
    for pos in range(len(labels) - 1, -1, -1):
        k = labels[pos]
        if space.datum.block_dim(k) == 0:
            continue
        pivot_inv = linalg.inverse(f, work[k, k])
        for j in labels[:pos + 1]:
            lower[k, j] = work[k, j]
        for i in labels[:pos]:
            upper[i, k] = linalg.matmul(f, work[i, k], pivot_inv)
        for i in labels[:pos]:
            for j in labels[:pos]:
                work[i, j] = f.sub(work[i, j], linalg.matmul(f, upper[i, k], work[k, j]))
    return upper.matrix, lower.matrix


def _preserves(field: Field, matrix: np.ndarray, gram: np.ndarray) -> bool:
    return bool(np.array_equal(linalg.congruence(field, gram, matrix), gram))


def in_symplectic_algebra(field: Field, c: np.ndarray, gram: np.ndarray) -> bool:
    """C^T G + G C = 0, i.e. omega(Cx, y) + omega(x, Cy) = 0 for the alternating G."""
    lie = field.add(linalg.matmul(field, np.asarray(c).T, gram), linalg.matmul(field, gram, c))
    return not np.any(lie)


def _spans_line(field: Field, matrix: np.ndarray, v: np.ndarray) -> bool:
    """Image of matrix is exactly the line through v."""
    if linalg.rank(field, matrix) != 1:
        return False
    return linalg.rank(field, np.hstack([matrix, v[:, None]])) == 1


def _pair(field: Field, phi_map: np.ndarray, block: np.ndarray) -> int:
    """tr(phi o X) for phi: M_i -> M_(i+1) and X: M_(i+1) -> M_i."""
    product = linalg.matmul(field, phi_map, block)
    return int(field.sum(np.diag(product))) if product.size else 0


def _pairings_unitary(datum, space, phi, a: BlockMatrix, b_minus: BlockMatrix) -> Tuple[int, int]:
    f = space.field
    ell = datum.ell
    maps, forms = phi.map_arrays(), phi.form_arrays()
    h = 0
    for i in range(ell):
        h = int(f.add(h, _pair(f, maps[i], a[i, i + 1])))
    top_map = map_from_form(f, forms[0], space.block(-ell, ell))
    g = int(f.mul(_pair(f, top_map, b_minus[ell, -ell]), space.inv2))
    return g, h


def _pairings_symplectic(datum, space, phi, a: BlockMatrix, b_minus: BlockMatrix) -> Tuple[int, int]:
    f = space.field
    m, ell = datum.m, datum.ell
    maps, forms = phi.map_arrays(), phi.form_arrays()
    form_ell, form_m = forms
    h = 0
    for i in range(1, ell):
        h = int(f.add(h, _pair(f, maps[i - 1], a[i, i + 1])))
    h = int(f.add(h, _pair(f, map_from_form(f, form_ell, space.block(ell + 1, ell)), a[ell, ell + 1])))
    g = _pair(f, map_from_form(f, form_m, space.block(1, m)), b_minus[m, 1])
    return g, h


def _pairings_orthogonal(datum, space, phi, a: BlockMatrix, b_minus: BlockMatrix) -> Tuple[int, int]:
    f = space.field
    maps = phi.map_arrays()
    g = _pair(f, maps[0], a[0, 1])
    h = 0
    for i in range(1, datum.ell):
        h = int(f.add(h, _pair(f, maps[i], a[i, i + 1])))
    return g, h


PAIRINGS = {
    "unitary": _pairings_unitary,
    "symplectic": _pairings_symplectic,
    "orthogonal": _pairings_orthogonal,
}


def _orthogonal_checks(datum, space, a: BlockMatrix, b: BlockMatrix, v: np.ndarray) -> Dict[str, bool]:
    """Block conditions of the pair (A, B) for the form t^-1 q_0 + q_+."""
    f = space.field
    plus = [l for l in datum.labels if l != 0]
    g0 = space.block(0, 0)
    g_plus = BlockMatrix(space, space.gram).sub(plus)
    idx_plus = np.concatenate([np.arange(space.dim)[space.slices[l]] for l in plus])
    idx_zero = np.arange(space.dim)[space.slices[0]]
    b00 = b.matrix[np.ix_(idx_zero, idx_zero)]
    b_p0 = b.matrix[np.ix_(idx_plus, idx_zero)]
    a_0p = a.matrix[np.ix_(idx_zero, idx_plus)]
    a_pp = a.sub(plus)
    b_pp = b.sub(plus)
    mm = lambda x, y: linalg.matmul(f, x, y)
    tr = lambda x: np.asarray(x).T
    v0 = v[idx_zero]
    q0 = int(space.quadratic(v[None, :], [0])[0])
    checks = {
        "A_++ preserves q_+": _preserves(f, a_pp, g_plus),
        "B_++ preserves q_+": _preserves(f, b_pp, g_plus),
        "B_00 preserves q_0": _preserves(f, b00, g0),
        # (x, B_00 x) = 2 q_0(x) + q_+(B_+0 x)
        "(x, B_00 x) = 2q_0(x) + q_+(B_+0 x)": np.array_equal(
            f.add(mm(g0, b00), mm(tr(b00), g0)),
            f.add(f.mul(g0, 2), mm(mm(tr(b_p0), g_plus), b_p0)),
        ),
        "(A_++ y, B_++ y) = q_0(A_0+ y) + 2q_+(y)": np.array_equal(
            f.add(mm(mm(tr(a_pp), g_plus), b_pp), mm(mm(tr(b_pp), g_plus), a_pp)),
            f.add(mm(mm(tr(a_0p), g0), a_0p), f.mul(g_plus, 2)),
        ),
        "(x, A_0+ y) = (B_+0 x, A_++ y)": np.array_equal(mm(g0, a_0p), mm(mm(tr(b_p0), g_plus), a_pp)),
        "(B_00 x, A_0+ y) = (B_+0 x, B_++ y)": np.array_equal(
            mm(mm(tr(b00), g0), a_0p), mm(mm(tr(b_p0), g_plus), b_pp)
        ),
    }
    if q0 != 0:
        reflection = f.sub(linalg.identity(v0.size), f.mul(linalg.outer(f, v0, f.matvec(g0, v0[None, :])[0]), int(f.inv(q0))))
        checks["B_00 is the reflection in v_0"] = bool(np.array_equal(b00, reflection))
    else:
        checks["B_00 is the reflection in v_0"] = False
    return {name: bool(ok) for name, ok in checks.items()}


def _random_functional(datum: GroupDatum, field: Field, seed: int) -> StableFunctional:
    rng = np.random.default_rng(seed)
    map_shapes, form_sizes = expected_shapes(datum)
    maps = [field.random_elements(rng, shape) for shape in map_shapes]
    forms = []
    for size in form_sizes:
        upper = np.triu(field.random_elements(rng, (size, size)))
        forms.append(field.add(upper, np.triu(upper, 1).T))
    return StableFunctional.from_arrays(maps, forms, source="search")


def reconstruction_oracle(
    datum: GroupDatum,
    space: GradedQuadraticSpace,
    point: DomainPoint,
    phi: Optional[StableFunctional] = None,
    seed: int = 0,
) -> ReconstructionResult:
    """
    Rebuild (A, B) from a domain point and check every identity.

    Any phi works for the pairing identity; a seeded random one is used when
    none is given. Failed identities are named in the result, never raised.

    Raises:
        InapplicableError: For split data, which have no (A, B) description
    """
    family = datum.family
    if family not in PAIRINGS:
        raise InapplicableError(f"no A/B reconstruction for type {datum.type_tag.value}")
    f = space.field
    phi = phi if phi is not None else _random_functional(datum, f, seed)
    identity = linalg.identity(space.dim)
    v = np.array(point.vector, dtype=np.int64)
    result = ReconstructionResult(vector=point.vector, scalar=point.scalar)
    checks: Dict[str, bool] = {}

    c = rank_one_part(datum, space, point)
    r = f.sub(identity, c)
    try:
        a_inv, b_matrix = block_ul(space, r)
    except DegenerateInputError as e:
        result.checks = {f"UL factorization exists ({e.message})": False}
        return result
    a_matrix = linalg.inverse(f, a_inv)
    a, b = BlockMatrix(space, a_matrix), BlockMatrix(space, b_matrix)
    labels = datum.labels
    checks["A is block unipotent upper triangular"] = all(
        np.array_equal(a[i, j], linalg.identity(datum.block_dim(i)) if i == j else np.zeros_like(a[i, j]))
        for x, i in enumerate(labels) for j in labels[:x + 1]
    )
    checks["B is block lower triangular"] = all(
        not np.any(b[i, j]) for x, i in enumerate(labels) for j in labels[x + 1:]
    )

    difference = f.sub(a_matrix, b_matrix)
    result.rank_a_minus_b = linalg.rank(f, difference)
    recovered = f.sub(identity, linalg.matmul(f, a_inv, b_matrix))
    if family == "symplectic" and point.is_zero_tensor:
        checks["A = B = I at the zero tensor"] = not np.any(difference) and np.array_equal(a_matrix, identity)
    else:
        checks["A - B has rank one"] = result.rank_a_minus_b == 1
        checks["j(A, B) = [v]"] = _spans_line(f, recovered, v)

    if family == "orthogonal":
        checks.update(_orthogonal_checks(datum, space, a, b, v))
    else:
        checks["A preserves the form"] = _preserves(f, a_matrix, space.gram)
        checks["B preserves the form"] = _preserves(f, b_matrix, space.gram)
        if family == "unitary":
            cross = linalg.matmul(f, linalg.matmul(f, a_matrix.T, space.gram), b_matrix)
            checks["(Ax, By) = (Bx, Ay)"] = linalg.is_symmetric(cross)
        else:
            checks["omega(Cx, y) + omega(x, Cy) = 0"] = in_symplectic_algebra(f, c, space.gram)

    count = datum.chi_arity if family != "unitary" else datum.ell + 1
    first = 1 if family == "symplectic" else 0
    result.f_prime_oracle = [linalg.det(f, b[i, i]) for i in range(first, first + count)]
    result.f_prime_formula = [int(x) for x in f_prime_eval(datum, space, point)]
    checks["f' = det of the diagonal blocks of B"] = result.f_prime_oracle == result.f_prime_formula

    b_minus = BlockMatrix(space, f.sub(identity, b_matrix))
    result.g_oracle, result.h_oracle = PAIRINGS[family](datum, space, phi, a, b_minus)
    result.h_formula = f_phi_eval(datum, space, phi, point, 0)
    result.g_formula = int(f.sub(f_phi_eval(datum, space, phi, point, 1), result.h_formula))
    checks["<phi, f''(A, B)> = f_phi"] = (result.g_oracle, result.h_oracle) == (result.g_formula, result.h_formula)

    result.checks = {name: bool(ok) for name, ok in checks.items()}
    if not result.match:
        logger.warning(f"Reconstruction mismatch at {point.vector}: {', '.join(result.failures)}")
    return result


def reconstruction_report(
    datum: GroupDatum,
    space: GradedQuadraticSpace,
    points: Optional[Iterable[DomainPoint]] = None,
    limit: Optional[int] = None,
    phi: Optional[StableFunctional] = None,
    seed: int = 0,
) -> ReconstructionReport:
    """
    Run the oracle over given points, or over the domain (all of it, or a
    seeded sample of `limit` points).
    """
    exhaustive = False
    if points is None:
        domain = list(enumerate_domain(datum, space))
        exhaustive = limit is None or limit >= len(domain)
        if not exhaustive:
            rng = np.random.default_rng(seed)
            domain = [domain[k] for k in sorted(rng.choice(len(domain), size=limit, replace=False))]
        points = domain
    checked = 0
    mismatches: List[ReconstructionResult] = []
    for point in points:
        outcome = reconstruction_oracle(datum, space, point, phi=phi, seed=seed)
        checked += 1
        if not outcome.match:
            mismatches.append(outcome)
    status = VerificationStatus.FAIL if mismatches else VerificationStatus.PASS
    logger.info(f"Reconstruction oracle: {checked} points, {len(mismatches)} mismatches")
    return ReconstructionReport(points=checked, mismatches=mismatches, exhaustive=exhaustive, status=status)
