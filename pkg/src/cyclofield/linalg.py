"""
Dense linear algebra over F_q for small matrices.

Matrices are int64 numpy arrays of field elements. Row operations are
vectorised; the loops run over pivots only.
"""

from typing import Tuple

import numpy as np

from src.core.errors import DegenerateInputError, InvalidInputError
from src.cyclofield.field import Field


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rect_identity(rows: int, cols: int) -> np.ndarray:
    return np.eye(rows, cols, dtype=np.int64)


def matmul(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise InvalidInputError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if field.is_prime:
        return (a @ b) % field.p
    return field.sum(field.mul(a[:, :, None], b[None, :, :]), axis=1)


def outer(field: Field, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return field.mul(np.asarray(x)[:, None], np.asarray(y)[None, :])


def congruence(field: Field, gram: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """P^T G P."""
    return matmul(field, matmul(field, np.asarray(basis).T, gram), basis)


def _row_reduce(field: Field, matrix: np.ndarray) -> Tuple[np.ndarray, list, int]:
    m = np.array(matrix, dtype=np.int64, copy=True)
    rows, cols = m.shape
    pivots = []
    swaps = 0
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        candidates = np.nonzero(m[r:, c])[0]
        if candidates.size == 0:
            continue
        k = r + int(candidates[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
            swaps += 1
        m[r] = field.mul(m[r], int(field.inv(m[r, c])))
        others = np.nonzero(m[:, c])[0]
        for i in others:
            if i != r:
                m[i] = field.sub(m[i], field.mul(m[r], int(m[i, c])))
        pivots.append(c)
        r += 1
    return m, pivots, swaps


def rref(field: Field, matrix: np.ndarray) -> Tuple[np.ndarray, list]:
    reduced, pivots, _ = _row_reduce(field, matrix)
    return reduced, pivots


def rank(field: Field, matrix: np.ndarray) -> int:
    matrix = np.asarray(matrix, dtype=np.int64)
    if matrix.size == 0:
        return 0
    return len(_row_reduce(field, matrix)[1])


def det(field: Field, matrix: np.ndarray) -> int:
    m = np.array(matrix, dtype=np.int64, copy=True)
    n = m.shape[0]
    if m.shape != (n, n):
        raise InvalidInputError(f"determinant of a non-square matrix {m.shape}")
    result = 1
    for c in range(n):
        candidates = np.nonzero(m[c:, c])[0]
        if candidates.size == 0:
            return 0
        k = c + int(candidates[0])
        if k != c:
            m[[c, k]] = m[[k, c]]
            result = int(field.neg(result))
        pivot = int(m[c, c])
        result = int(field.mul(result, pivot))
        inv = int(field.inv(pivot))
        for i in range(c + 1, n):
            if m[i, c]:
                factor = int(field.mul(m[i, c], inv))
                m[i] = field.sub(m[i], field.mul(m[c], factor))
    return result


def inverse(field: Field, matrix: np.ndarray) -> np.ndarray:
    """
    Inverse of a square matrix.

    Raises:
        DegenerateInputError: If the matrix is singular
    """
    m = np.asarray(matrix, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise InvalidInputError(f"inverse of a non-square matrix {m.shape}")
    if n == 0:
        return m.copy()
    reduced, pivots, _ = _row_reduce(field, np.hstack([m, identity(n)]))
    if len(pivots) < n or pivots[:n] != list(range(n)):
        raise DegenerateInputError("matrix is singular")
    return reduced[:, n:]


def column_space_basis(field: Field, matrix: np.ndarray) -> np.ndarray:
    """Columns of matrix at its pivot positions."""
    _, pivots = rref(field, matrix)
    return np.asarray(matrix, dtype=np.int64)[:, pivots]


def is_symmetric(matrix: np.ndarray) -> bool:
    matrix = np.asarray(matrix)
    return matrix.shape[0] == matrix.shape[1] and bool(np.array_equal(matrix, matrix.T))


def is_alternating(field: Field, matrix: np.ndarray) -> bool:
    matrix = np.asarray(matrix, dtype=np.int64)
    return bool(np.array_equal(field.neg(matrix.T), matrix)) and not np.any(np.diag(matrix))
