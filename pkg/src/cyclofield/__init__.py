"""Finite fields, characters, exact cyclotomic sums and polynomials over F_q."""

from src.cyclofield.field import Field, FieldEmbedding, extend_field, field_arithmetic, field_from_order, get_field
from src.cyclofield.characters import AdditiveCharacter, MultiplicativeCharacter
from src.cyclofield.cyclosum import CharSumAccumulator, CycloSum, char_sum_accumulate
from src.cyclofield.polynomial import Poly, PolyRoots, poly_roots

__all__ = [
    "Field",
    "FieldEmbedding",
    "extend_field",
    "field_arithmetic",
    "field_from_order",
    "get_field",
    "AdditiveCharacter",
    "MultiplicativeCharacter",
    "CharSumAccumulator",
    "CycloSum",
    "char_sum_accumulate",
    "Poly",
    "PolyRoots",
    "poly_roots",
]
