"""
Projective enumeration and quadric point counts.
"""

from typing import Iterator, Optional

import numpy as np

from src.cyclofield import linalg
from src.cyclofield.characters import quadratic_character
from src.cyclofield.field import Field


def projective_size(q: int, dim: int) -> int:
    """|P^{dim-1}(F_q)|."""
    return (q ** dim - 1) // (q - 1)


def projective_points(field: Field, dim: int, chunk_size: int = 1 << 16) -> Iterator[np.ndarray]:
    """
    Normalized representatives of P(F_q^dim) in chunks.

    Each point appears once, with its first nonzero coordinate equal to 1.
    Chunks are (N, dim) int64 arrays in a fixed order.
    """
    q = field.q
    for lead in range(dim):
        free = dim - lead - 1
        total = q ** free
        powers = q ** np.arange(free - 1, -1, -1, dtype=np.int64)
        for start in range(0, total, chunk_size):
            idx = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
            chunk = np.zeros((idx.size, dim), dtype=np.int64)
            chunk[:, lead] = 1
            if free:
                chunk[:, lead + 1:] = (idx[:, None] // powers[None, :]) % q
            yield chunk


def affine_points(field: Field, dim: int, chunk_size: int = 1 << 16, nonzero: bool = False) -> Iterator[np.ndarray]:
    """All of F_q^dim (or (F_q^x)^dim) in chunks."""
    base = field.q - 1 if nonzero else field.q
    offset = 1 if nonzero else 0
    total = base ** dim
    powers = base ** np.arange(dim - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk_size):
        idx = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
        yield (idx[:, None] // powers[None, :]) % base + offset


def quadric_point_count(field: Field, gram: np.ndarray, chunk_size: int = 1 << 16) -> int:
    """
    Number of projective zeros of q(v) = v^T G v / 2 by exhaustive enumeration.

    The zero form counts every point.
    """
    gram = np.asarray(gram, dtype=np.int64)
    dim = gram.shape[0]
    count = 0
    for chunk in projective_points(field, dim, chunk_size):
        values = field.bilinear(chunk, gram, chunk)
        count += int(np.count_nonzero(values == 0))
    return count


def nondegenerate_quadric_count(field: Field, gram: np.ndarray) -> Optional[int]:
    """
    Closed-form point count of a nondegenerate quadric in P^{dim-1}.

    Returns None for degenerate forms.
    """
    gram = np.asarray(gram, dtype=np.int64)
    dim = gram.shape[0]
    q = field.q
    determinant = linalg.det(field, gram)
    if determinant == 0:
        return None
    if dim % 2 == 1:
        r = (dim - 1) // 2
        return (q ** (2 * r) - 1) // (q - 1)
    r = dim // 2
    discriminant = determinant if r % 2 == 0 else int(field.neg(determinant))
    epsilon = int(quadratic_character(field, discriminant))
    return (q ** (2 * r - 1) - 1) // (q - 1) + epsilon * q ** (r - 1)
