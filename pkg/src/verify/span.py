"""
Span tests for the unitary m = 2 structure theorems.

The trace function is only determined up to geometrically constant twists,
so S(t) is tested for membership in a span of model vectors rather than
for equality with one of them.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np
from scipy import linalg as sla

from src.core.errors import InapplicableError, InvalidInputError
from src.cyclofield.characters import AdditiveCharacter, MultiplicativeCharacter
from src.cyclofield.field import Field, get_field
from src.cyclofield.polynomial import Poly
from src.quadform.models import Pencil
from src.sum_engine.models import TraceTable
from src.verify.models import SPAN_TOLERANCE, SpanTestResult


logger = logging.getLogger("klspark.verify")


def table_field(table: TraceTable) -> Field:
    spec = table.field
    return get_field(spec.p, spec.e, spec.modulus, spec.seed)


def table_psi(table: TraceTable) -> AdditiveCharacter:
    return AdditiveCharacter(table_field(table), int(table.config.get("psi_multiplier", 1)))


def _require_unitary_m2(table: TraceTable, parity: int) -> int:
    datum = table.config.get("datum", {})
    if datum.get("type_tag") != "2A" or datum.get("m") != 2:
        raise InapplicableError("span tests apply to unitary data with m = 2")
    n = int(datum["n"])
    if n % 2 != parity:
        kind = "odd" if parity else "even"
        raise InapplicableError(f"this span test needs {kind} n, got n={n}")
    return n


def check_roots(field: Field, roots: Sequence[Optional[int]], n: int) -> List[int]:
    """
    Raises:
        InapplicableError: If the roots are repeated, irrational or too few
    """
    if any(r is None for r in roots):
        raise InapplicableError("the pencil degenerates at infinity")
    values = [int(r) for r in roots]
    if len(set(values)) != len(values):
        raise InapplicableError(f"pencil roots {values} are repeated")
    if len(values) != n:
        raise InapplicableError(f"only {len(values)} of the {n} pencil roots lie in F_{field.q}")
    if any(not 0 <= r < field.q for r in values):
        raise InvalidInputError(f"roots {values} are not elements of F_{field.q}")
    return values


def roots_from_pencil(pencil: Pencil, n: int) -> List[int]:
    """
    The n degeneracy points of a pencil in general position, all rational.

    Raises:
        InapplicableError: If the pencil is not squarefree or has irrational roots
    """
    if not pencil.squarefree:
        raise InapplicableError("pencil has a repeated degeneracy point")
    if not pencil.all_roots_rational or pencil.infinity_multiplicity:
        raise InapplicableError("pencil roots are not all rational")
    values = pencil.rational_values
    if len(values) != n:
        raise InapplicableError(f"expected {n} pencil roots, found {len(values)}")
    return values


def fit_span(target: np.ndarray, basis: np.ndarray, description: str, tolerance: float = SPAN_TOLERANCE) -> SpanTestResult:
    """Least squares of target against the columns of basis."""
    target = np.asarray(target, dtype=np.complex128)
    basis = np.asarray(basis, dtype=np.complex128).reshape(target.size, -1)
    coefficients, _, rank, _ = sla.lstsq(basis, target)
    residual = float(np.linalg.norm(basis @ coefficients - target))
    target_norm = float(np.linalg.norm(target))
    return SpanTestResult(
        basis=description,
        basis_size=basis.shape[1],
        samples=target.size,
        determined=int(rank) < target.size,
        residual=residual,
        target_norm=target_norm,
        coefficients=[[float(c.real), float(c.imag)] for c in coefficients],
        passed=residual <= tolerance * target_norm,
    )


def additive_basis(psi: AdditiveCharacter, ts: np.ndarray, roots: Sequence[int]) -> np.ndarray:
    """Columns 1 and psi(lambda_i t)."""
    field = psi.field
    columns = [np.ones(ts.size, dtype=np.complex128)]
    columns += [psi(field.mul(ts, int(r))) for r in roots]
    return np.column_stack(columns)


def quadratic_model(psi: AdditiveCharacter, ts: np.ndarray, roots: Sequence[int], eta: MultiplicativeCharacter) -> np.ndarray:
    """G(t) = sum over lambda off the roots of eta(prod (lambda - lambda_i)) psi(lambda t)."""
    field = psi.field
    poly = Poly.from_roots(field, list(roots))
    lambdas = field.elements()
    weights = eta(poly(lambdas)).astype(np.complex128)
    phases = psi(field.mul(lambdas[None, :], ts[:, None]))
    return phases @ weights


def span_test_odd_unitary(table: TraceTable, roots: Sequence[Optional[int]], trivial_control: bool = False) -> SpanTestResult:
    """
    Whether (S(t))_t lies in the span of 1 and psi(lambda_i t).

    With trivial_control the psi(lambda_i t) are replaced by the trivial
    character, which a genuine table must fail.

    Raises:
        InapplicableError: For non-unitary or even-n tables and for repeated or irrational roots
    """
    n = _require_unitary_m2(table, 1)
    field = table_field(table)
    values = check_roots(field, roots, n)
    ts = table.ts()
    if trivial_control:
        basis = np.ones((ts.size, 1), dtype=np.complex128)
        description = "constant (trivial additive character)"
    else:
        basis = additive_basis(table_psi(table), ts, values)
        description = f"constant + psi(lambda t) for lambda in {values}"
    result = fit_span(table.values(), basis, description)
    logger.info(f"Odd unitary span test over F_{field.q}: relative residual {result.relative_residual:.3e}")
    return result


def span_test_even_unitary(table: TraceTable, roots: Sequence[Optional[int]], trivial_control: bool = False) -> SpanTestResult:
    """
    Whether (S(t))_t lies in the span of 1 and the quadratic-character model G(t).

    With trivial_control eta is replaced by the trivial character.

    Raises:
        InapplicableError: For non-unitary or odd-n tables and for repeated or irrational roots
    """
    n = _require_unitary_m2(table, 0)
    field = table_field(table)
    values = check_roots(field, roots, n)
    ts = table.ts()
    eta = MultiplicativeCharacter.trivial(field) if trivial_control else MultiplicativeCharacter.quadratic(field)
    model = quadratic_model(table_psi(table), ts, values, eta)
    basis = np.column_stack([np.ones(ts.size, dtype=np.complex128), model])
    name = "trivial" if trivial_control else "quadratic"
    result = fit_span(table.values(), basis, f"constant + G(t) with {name} eta, roots {values}")
    logger.info(f"Even unitary span test over F_{field.q}: relative residual {result.relative_residual:.3e}")
    return result


def random_control(table: TraceTable, roots: Sequence[Optional[int]], seed: int = 0) -> SpanTestResult:
    """The basis of the matching span test against a random complex vector."""
    datum = table.config.get("datum", {})
    n = int(datum.get("n", 0))
    field = table_field(table)
    values = check_roots(field, roots, n)
    ts = table.ts()
    psi = table_psi(table)
    if n % 2:
        basis = additive_basis(psi, ts, values)
    else:
        model = quadratic_model(psi, ts, values, MultiplicativeCharacter.quadratic(field))
        basis = np.column_stack([np.ones(ts.size, dtype=np.complex128), model])
    rng = np.random.default_rng(seed)
    target = rng.standard_normal(ts.size) + 1j * rng.standard_normal(ts.size)
    return fit_span(target, basis, f"random vector against the n={n} basis")
