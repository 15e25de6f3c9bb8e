import numpy as np
import pytest

from src.core.errors import BackendMismatchError, DegenerateInputError, InvalidInputError
from src.core.models import Backend
from src.cyclofield import linalg
from src.cyclofield.characters import (
    AdditiveCharacter,
    MultiplicativeCharacter,
    is_square,
    quadratic_character,
    sqrt_or_none,
)
from src.cyclofield.cyclosum import CharSumAccumulator, CycloSum, char_sum_accumulate
from src.cyclofield.field import Field, extend_field, field_arithmetic, field_from_order, get_field
from src.cyclofield.polynomial import Poly, poly_roots


@pytest.mark.parametrize("p,e", [(3, 1), (7, 1), (3, 2), (5, 2), (3, 3)])
def test_field_axioms(p, e):
    field = get_field(p, e)
    a = field.elements()[:, None]
    b = field.elements()[None, :]
    assert np.array_equal(field.add(a, b), field.add(b, a))
    assert np.array_equal(field.mul(a, b), field.mul(b, a))
    assert np.all(field.add(field.elements(), field.neg(field.elements())) == 0)
    units = field.units()
    assert np.all(field.mul(units, field.inv(units)) == 1)
    c = field.elements()[::3]
    lhs = field.mul(a[:, :, None], field.add(b[:, :, None], c[None, None, :]))
    rhs = field.add(field.mul(a[:, :, None], b[:, :, None]), field.mul(a[:, :, None], c[None, None, :]))
    assert np.array_equal(lhs, rhs)


def test_generator_and_logs(f9):
    assert len(set(f9.exp_table.tolist())) == 8
    assert np.array_equal(f9.exp(f9.dlog(f9.units())), f9.units())
    assert int(f9.pow(f9.exp(1), 8)) == 1


def test_trace_is_linear_and_frobenius_invariant(f9):
    x = f9.elements()
    assert np.array_equal(f9.trace(f9.add(x, 1)), (f9.trace(x) + f9.trace(1)) % 3)
    assert np.array_equal(f9.trace(f9.pow(x, 3)), f9.trace(x))
    assert int(f9.trace(1)) == 2


def test_prime_field_from_int(f7):
    assert f7.from_int(-1) == 6
    assert f7.from_int(15) == 1


@pytest.mark.parametrize("p,e", [(2, 1), (9, 1), (3, 9)])
def test_unsupported_fields(p, e):
    with pytest.raises(InvalidInputError):
        Field(p, e)


def test_field_from_order():
    assert field_from_order(27).e == 3
    with pytest.raises(InvalidInputError):
        field_from_order(12)


def test_field_arithmetic_dispatch(f7):
    assert int(field_arithmetic(f7, 3, 5, "mul")) == 1
    assert int(field_arithmetic(f7, 3, 2, "pow")) == 2
    with pytest.raises(DegenerateInputError):
        field_arithmetic(f7, 0, None, "inv")
    with pytest.raises(InvalidInputError):
        field_arithmetic(f7, 1, 1, "mod")


def test_explicit_modulus_reproduces_field(f9):
    again = Field(3, 2, f9.modulus, f9.seed)
    assert np.array_equal(again.exp_table, f9.exp_table)
    with pytest.raises(InvalidInputError):
        Field(3, 2, [1, 0, 1])


def test_extension_embedding():
    base = get_field(3)
    ext = extend_field(base, 2)
    emb = ext.embedding
    x = base.elements()
    assert np.array_equal(emb.restrict(emb.embed(x)), x)
    assert np.array_equal(emb.relative_trace(emb.embed(x)), base.mul(x, 2))
    assert np.array_equal(emb.relative_norm(emb.embed(x)), base.square(x))
    y = ext.elements()
    assert np.array_equal(ext.trace(y), base.trace(emb.relative_trace(y)))


def test_embedding_is_fixed_at_construction():
    base = get_field(3)
    ext = extend_field(base, 2)
    assert ext.embedding.base is base and ext.embedding.extension is ext
    assert base.embedding is None
    assert get_field(3, 2).embedding is None
    assert extend_field(base, 1).embedding.degree == 1
    assert Field(3, 2, base=base).embedding.degree == 2


def test_extension_of_extension(f9):
    ext = extend_field(f9, 2)
    assert ext.q == 81
    y = ext.units()
    assert np.array_equal(ext.trace(y), f9.trace(ext.embedding.relative_trace(y)))


def test_character_lifts(f9):
    ext = extend_field(f9, 2)
    emb = ext.embedding
    y = ext.units()
    psi = AdditiveCharacter(f9, 4)
    assert np.allclose(psi.lift(ext)(y), psi(emb.relative_trace(y)))
    for r in (1, 2, 4):
        chi = MultiplicativeCharacter(f9, r)
        assert np.allclose(chi.lift(ext)(y), chi(emb.relative_norm(y)))


def test_additive_character(f7):
    with pytest.raises(InvalidInputError):
        AdditiveCharacter(f7, 0)
    psi = AdditiveCharacter(f7, 3)
    assert abs(psi(f7.elements()).sum()) < 1e-12
    assert np.allclose(psi(f7.add(2, 5)), psi(2) * psi(5))


def test_multiplicative_characters(f9):
    units = f9.units()
    for r in range(8):
        chi = MultiplicativeCharacter(f9, r)
        total = chi(units).sum()
        assert abs(total - (8 if r == 0 else 0)) < 1e-9
        assert chi(0) == 0
    eta = MultiplicativeCharacter.quadratic(f9)
    assert eta.is_exact and eta.order == 2
    values = eta(units)
    assert values.dtype == np.int64
    a, b = units[:, None], units[None, :]
    assert np.array_equal(eta(f9.mul(a, b)), eta(a) * eta(b))
    assert MultiplicativeCharacter(f9, 2).order == 4
    assert not MultiplicativeCharacter(f9, 2).is_exact


def test_gauss_sum_magnitude(f9):
    psi = AdditiveCharacter(f9, 1)
    x = f9.units()
    for r in range(1, 8):
        g = (MultiplicativeCharacter(f9, r)(x) * psi(x)).sum()
        assert abs(abs(g) ** 2 - 9) < 1e-9


def test_squares(f7):
    assert is_square(f7, 2) and not is_square(f7, 3) and is_square(f7, 0)
    root = sqrt_or_none(f7, 2)
    assert int(f7.square(root)) == 2
    assert sqrt_or_none(f7, 5) is None
    assert list(quadratic_character(f7, [0, 1, 3])) == [0, 1, -1]


def test_cyclosum_arithmetic():
    p = 5
    assert sum((CycloSum.zeta(p, k) for k in range(p)), CycloSum.zero(p)) == 0
    assert CycloSum.zeta(p, 2) * CycloSum.zeta(p, 3) == 1
    z = CycloSum.zeta(p, 1) + 3
    assert abs(z.to_complex() - (np.exp(2j * np.pi / 5) + 3)) < 1e-12
    assert (z - z).is_integer() and (z - z).as_integer() == 0
    with pytest.raises(InvalidInputError):
        z.as_integer()
    with pytest.raises(InvalidInputError):
        CycloSum(5, [1, 2, 3])


def test_quadratic_gauss_sum_is_exact(f7, psi7):
    accumulator = CharSumAccumulator(f7, psi7)
    accumulator.add(quadratic_character(f7, f7.units()), f7.units())
    g = accumulator.result()
    assert accumulator.backend == Backend.EXACT
    assert g * g == -7


def test_accumulator_merge_and_mismatch(f7, psi7):
    left, right = CharSumAccumulator(f7, psi7), CharSumAccumulator(f7, psi7)
    left.add(np.ones(3, dtype=np.int64), np.array([1, 2, 3]))
    right.add(np.ones(3, dtype=np.int64), np.array([4, 5, 6]))
    left.merge(right)
    assert left.result() == -1
    assert left.count == 6

    floating = CharSumAccumulator(f7, psi7)
    floating.add(np.array([1j]), np.array([0]))
    with pytest.raises(BackendMismatchError):
        left.merge(floating)
    with pytest.raises(BackendMismatchError):
        char_sum_accumulate([(1, 2), (0.5 + 0j, 3)], f7, psi7)


def test_linalg_inverse_and_det(f9, rng):
    while True:
        m = f9.random_elements(rng, (4, 4))
        if linalg.det(f9, m) != 0:
            break
    assert np.array_equal(linalg.matmul(f9, m, linalg.inverse(f9, m)), linalg.identity(4))
    other = f9.random_elements(rng, (4, 4))
    assert linalg.det(f9, linalg.matmul(f9, m, other)) == int(f9.mul(linalg.det(f9, m), linalg.det(f9, other)))
    singular = m.copy()
    singular[3] = singular[0]
    assert linalg.rank(f9, singular) == 3
    with pytest.raises(DegenerateInputError, match="singular"):
        linalg.inverse(f9, singular)
    assert linalg.rank(f9, np.zeros((0, 3), dtype=np.int64)) == 0


def test_linalg_form_predicates(f7):
    omega = np.array([[0, 1], [6, 0]])
    assert linalg.is_alternating(f7, omega)
    assert not linalg.is_symmetric(omega)
    basis = np.array([[1, 2], [0, 1]])
    assert linalg.is_alternating(f7, linalg.congruence(f7, omega, basis))
    assert linalg.column_space_basis(f7, np.array([[1, 2], [2, 4]])).shape == (2, 1)


def test_poly_roots_and_squarefree(f7):
    f = Poly.from_roots(f7, [1, 2, 2])
    assert f.rational_roots() == {1: 1, 2: 2}
    assert not f.is_squarefree()
    roots = poly_roots(f)
    assert roots.multiset == [1, 2, 2] and roots.degree == 3

    g = Poly(f7, [1, 0, 4])  # x^2 - 3, 3 is a non-square mod 7
    assert g.rational_roots() == {}
    assert g.is_squarefree()
    assert list(g([0, 1, 2])) == [4, 5, 1]


def test_poly_division_and_gcd(f7):
    a = Poly.from_roots(f7, [1, 3])
    b = Poly.from_roots(f7, [3, 5])
    assert a.gcd(b) == Poly.from_roots(f7, [3])
    quotient, remainder = (a * b).divmod(a)
    assert quotient == b and remainder.is_zero()
    assert Poly(f7, [3, 2, 1]).derivative() == Poly(f7, [6, 2])
    with pytest.raises(DegenerateInputError):
        Poly(f7, []).is_squarefree()
    with pytest.raises(DegenerateInputError):
        a.divmod(Poly(f7, [0]))
