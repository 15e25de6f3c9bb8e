"""
Classical Kloosterman sums Kl_n(a), the baseline for the split Iwahori case.
"""

import numpy as np

from src.core.errors import DegenerateInputError, InvalidInputError
from src.cyclofield.characters import AdditiveCharacter
from src.cyclofield.cyclosum import CharSumAccumulator, CycloSum
from src.quadform.projective import affine_points


def classical_kloosterman(n: int, a: int, psi: AdditiveCharacter, chunk_size: int = 1 << 16) -> CycloSum:
    """
    Kl_n(a) = sum over x_1...x_n = a of psi(x_1 + ... + x_n).

    The first n-1 coordinates run over (F_q^x)^(n-1) and x_n is solved for.

    Raises:
        DegenerateInputError: If a = 0
        InvalidInputError: If n < 1
    """
    field = psi.field
    if n < 1:
        raise InvalidInputError(f"Kl_n needs n >= 1, got {n}")
    a = int(a)
    if a == 0:
        raise DegenerateInputError("Kl_n(a) is defined for a in F_q^x only")
    accumulator = CharSumAccumulator(field, psi)
    for xs in affine_points(field, n - 1, chunk_size, nonzero=True):
        product = np.ones(xs.shape[0], dtype=np.int64)
        total = np.zeros(xs.shape[0], dtype=np.int64)
        for k in range(n - 1):
            product = field.mul(product, xs[:, k])
            total = field.add(total, xs[:, k])
        last = field.div(a, product)
        accumulator.add(np.ones(xs.shape[0], dtype=np.int64), field.add(total, last))
    return accumulator.result()
