"""
Pencils of quadrics.

The characteristic polynomial det(phi - lambda q) is computed by
fraction-free (Bareiss) elimination over F_q[lambda].
"""

from typing import List

import numpy as np

from src.core.errors import DegenerateInputError, InvalidInputError
from src.cyclofield import linalg
from src.cyclofield.field import Field
from src.cyclofield.polynomial import Poly
from src.quadform.models import Pencil, PencilRoot


def polynomial_determinant(field: Field, entries: List[List[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials by Bareiss elimination."""
    n = len(entries)
    m = [row[:] for row in entries]
    sign = 1
    previous = Poly.constant(field, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return Poly(field, [])
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                numerator = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = numerator.exact_div(previous)
        previous = m[k][k]
    result = m[n - 1][n - 1] if n else Poly.constant(field, 1)
    return result if sign == 1 else -result


def characteristic_polynomial(field: Field, q_form: np.ndarray, phi_form: np.ndarray) -> Poly:
    """det(phi - lambda q)."""
    n = q_form.shape[0]
    entries = [
        [Poly(field, [int(field.neg(q_form[i, j])), int(phi_form[i, j])]) for j in range(n)]
        for i in range(n)
    ]
    return polynomial_determinant(field, entries)


def pencil_degeneracy(field: Field, q_form: np.ndarray, phi_form: np.ndarray) -> Pencil:
    """
    Degeneracy data of the pencil spanned by q and phi.

    Args:
        field: Field of the entries
        q_form: Gram matrix of q (must be nondegenerate)
        phi_form: Gram matrix of phi on the same space

    Returns:
        The Pencil with rational roots, multiplicities, the multiplicity at
        infinity and the squarefree flag

    Raises:
        DegenerateInputError: If q is degenerate
        InvalidInputError: If the shapes differ
    """
    q_form = np.asarray(q_form, dtype=np.int64)
    phi_form = np.asarray(phi_form, dtype=np.int64)
    if q_form.shape != phi_form.shape or q_form.shape[0] != q_form.shape[1]:
        raise InvalidInputError(f"pencil forms must be square of equal shape: {q_form.shape} vs {phi_form.shape}")
    dim = q_form.shape[0]
    if linalg.det(field, q_form) == 0:
        raise DegenerateInputError("q is degenerate; the pencil needs a nondegenerate base form")
    f = characteristic_polynomial(field, q_form, phi_form)
    roots = f.rational_roots()
    infinity = dim - f.degree
    squarefree = f.is_squarefree() and infinity <= 1
    derivative = f.derivative()
    if f.degree <= 0:
        finite_points = 0
    elif derivative.is_zero():
        finite_points = len(roots)
    else:
        finite_points = f.exact_div(f.gcd(derivative)).degree
    degeneracy_count = finite_points + (1 if infinity > 0 else 0)
    root_models = [PencilRoot(value=r, multiplicity=k) for r, k in sorted(roots.items())]
    if infinity > 0:
        root_models.append(PencilRoot(value=None, multiplicity=infinity))
    return Pencil(
        dim=dim,
        char_poly=f.coeffs,
        roots=root_models,
        infinity_multiplicity=infinity,
        squarefree=squarefree,
        degeneracy_count=degeneracy_count,
    )
