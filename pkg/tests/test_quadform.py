import numpy as np
import pytest

from src.core.errors import ClassificationError, DegenerateInputError, InapplicableError, InvalidInputError
from src.core.models import GroupType
from src.cyclofield import linalg
from src.cyclofield.field import get_field
from src.quadform.datum import divisor_options, make_datum
from src.quadform.models import StableFunctional
from src.quadform.pencil import characteristic_polynomial, pencil_degeneracy
from src.quadform.projective import (
    nondegenerate_quadric_count,
    projective_points,
    projective_size,
    quadric_point_count,
)
from src.quadform.space import build_space
from src.quadform.stability import (
    canonical_functional,
    expected_euler_characteristic,
    expected_shapes,
    is_stable,
    validate_shapes,
)


def test_unitary_divisor_rules():
    assert [(o.m, o.d) for o in divisor_options(GroupType.UNITARY, 3)] == [(6, 1), (2, 3)]
    datum = make_datum("2A", 4, 6)
    assert (datum.d, datum.ell) == (1, 1)
    assert [b.dim for b in datum.blocks] == [1, 2, 1]
    assert datum.labels == [-1, 0, 1]
    assert datum.weight == 3 and datum.chi_arity == 2 and datum.standard_rank == 4


@pytest.mark.parametrize("type_tag,n,m,dim", [
    ("A", 4, 4, 4),
    ("2A", 5, 10, 5),
    ("B", 2, 4, 5),
    ("B", 2, 2, 5),
    ("C", 2, 4, 4),
    ("C", 3, 2, 6),
    ("D", 3, 4, 6),
    ("D", 4, 2, 8),
    ("2D", 3, 6, 6),
])
def test_block_dimensions_add_up(type_tag, n, m, dim):
    datum = make_datum(type_tag, n, m)
    assert datum.dim == dim
    assert datum.m == m


def test_symplectic_blocks():
    datum = make_datum("C", 2, 4)
    assert datum.ell == 2 and datum.d == 1
    assert datum.labels == [1, 2, 3, 4]
    assert datum.family == "symplectic" and not datum.has_sign_component
    assert datum.weight == 3 and datum.standard_rank == 5


def test_classification_errors_name_the_rule():
    with pytest.raises(ClassificationError) as excinfo:
        make_datum("B", 3, 4)
    assert excinfo.value.rule == "m must be 2n/d for a divisor d of n"
    assert excinfo.value.exit_code == 2

    with pytest.raises(ClassificationError) as excinfo:
        make_datum("2A", 2, 2)
    assert excinfo.value.rule == "n >= 3"

    with pytest.raises(ClassificationError) as excinfo:
        make_datum("E8", 8, 30)
    assert excinfo.value.rule == "classical types only"

    with pytest.raises(ClassificationError):
        make_datum("A", 3, 2)
    with pytest.raises(ClassificationError):
        make_datum("C", 4, 4, d=1)


def test_explicit_d_selects_option():
    datum = make_datum("C", 4, 2, d=4)
    assert datum.d == 4 and datum.ell == 1


def test_build_space_pairing_pattern():
    field = get_field(5)
    for args in [("2A", 4, 6), ("B", 2, 4), ("C", 2, 4), ("D", 3, 4), ("2D", 3, 6)]:
        datum = make_datum(*args)
        space = build_space(datum, field)
        assert space.check_pairing_pattern() == []
        if datum.family == "symplectic":
            assert linalg.is_alternating(field, space.gram)
        else:
            assert linalg.is_symmetric(space.gram)
        assert linalg.det(field, space.gram) != 0


def test_build_space_with_seed_keeps_pattern():
    field = get_field(7)
    datum = make_datum("2A", 4, 6)
    space = build_space(datum, field, seed=3)
    assert space.check_pairing_pattern() == []
    assert linalg.det(field, space.gram) != 0


def test_unitary_center_is_identity(f7):
    space = build_space(make_datum("2A", 3, 2), f7)
    assert np.array_equal(space.block(0, 0), np.eye(3, dtype=np.int64))
    v = np.array([[1, 1, 1]])
    assert int(space.quadratic(v)[0]) == int(f7.mul(3, f7.inv(2)))


def test_projective_enumeration(f7):
    points = np.concatenate(list(projective_points(f7, 3, chunk_size=10)))
    assert points.shape == (projective_size(7, 3), 3)
    leads = [row[np.nonzero(row)[0][0]] for row in points]
    assert all(int(x) == 1 for x in leads)
    assert len({tuple(row) for row in points.tolist()}) == points.shape[0]


@pytest.mark.parametrize("gram", [np.eye(3), np.diag([1, 1, 1, 3]), np.diag([1, 6, 1, 6])])
def test_quadric_counts_match_closed_form(f7, gram):
    gram = gram.astype(np.int64)
    assert quadric_point_count(f7, gram) == nondegenerate_quadric_count(f7, gram)


def test_degenerate_quadric_has_no_closed_form(f7):
    assert nondegenerate_quadric_count(f7, np.diag([1, 0, 2])) is None


def test_characteristic_polynomial(f7):
    f = characteristic_polynomial(f7, np.eye(3, dtype=np.int64), np.diag([1, 2, 3]))
    assert f.rational_roots() == {1: 1, 2: 1, 3: 1}


def test_pencil_general_position(f7):
    pencil = pencil_degeneracy(f7, np.eye(3, dtype=np.int64), np.diag([1, 2, 3]))
    assert pencil.general_position
    assert pencil.rational_values == [1, 2, 3]
    assert pencil.all_roots_rational and pencil.infinity_multiplicity == 0


def test_pencil_repeated_roots(f7):
    repeated = pencil_degeneracy(f7, np.eye(3, dtype=np.int64), np.diag([1, 1, 3]))
    assert not repeated.squarefree and not repeated.general_position
    assert repeated.degeneracy_count == 2
    zero = pencil_degeneracy(f7, np.eye(2, dtype=np.int64), np.zeros((2, 2), dtype=np.int64))
    assert zero.roots[0].value == 0 and zero.roots[0].multiplicity == 2
    assert zero.infinity_multiplicity == 0 and not zero.squarefree
    with pytest.raises(DegenerateInputError):
        pencil_degeneracy(f7, np.diag([1, 0]), np.eye(2, dtype=np.int64))


def test_pencil_with_irrational_roots(f7):
    # lambda^2 - 3 lambda + 1 has discriminant 5, a non-square mod 7
    pencil = pencil_degeneracy(f7, np.eye(2, dtype=np.int64), np.array([[1, 1], [1, 2]]))
    assert pencil.squarefree and pencil.general_position
    assert pencil.roots == []
    assert not pencil.all_roots_rational


def test_expected_shapes():
    assert expected_shapes(make_datum("2A", 4, 6)) == ([(1, 2)], [1])
    assert expected_shapes(make_datum("C", 2, 4)) == ([(1, 1)], [1, 1])
    assert expected_shapes(make_datum("B", 2, 4)) == ([(1, 2), (1, 1)], [])
    assert expected_shapes(make_datum("A", 3, 3)) == ([(1, 1)] * 3, [])


def test_validate_shapes_rejects_bad_input():
    datum = make_datum("2A", 3, 2)
    with pytest.raises(InvalidInputError):
        validate_shapes(datum, StableFunctional(maps=[], forms=[[[1, 0], [0, 1]]]))
    with pytest.raises(InvalidInputError, match="symmetric"):
        validate_shapes(datum, StableFunctional(maps=[], forms=[[[1, 1, 0], [0, 1, 0], [0, 0, 1]]]))
    with pytest.raises(InvalidInputError):
        validate_shapes(datum, StableFunctional(maps=[[[1]]], forms=[np.eye(3, dtype=int).tolist()]))


def test_unitary_canonical_functional(unitary_m2):
    datum, space, phi = unitary_m2
    assert phi.source == "canonical"
    assert phi.forms == [[[1, 0, 0], [0, 2, 0], [0, 0, 3]]]
    result = is_stable(datum, space, phi)
    assert result.stable and result.phi_ell_nondegenerate
    assert expected_euler_characteristic(datum, space, phi) == 3


def test_degenerate_canonical_functional(f7):
    datum = make_datum("2A", 3, 2)
    space = build_space(datum, f7)
    phi = canonical_functional(datum, space, degenerate=True)
    assert phi.forms == [[[0, 0, 0], [0, 1, 0], [0, 0, 2]]]
    result = is_stable(datum, space, phi)
    assert result.stable and result.phi_ell_nondegenerate is False
    assert expected_euler_characteristic(datum, space, phi) == 2


def test_search_fallback_when_diagonal_collides():
    field = get_field(3)
    datum = make_datum("2A", 3, 2)
    space = build_space(datum, field)
    phi = canonical_functional(datum, space, seed=5)
    assert phi.source == "search"
    result = is_stable(datum, space, phi)
    assert result.stable and result.phi_ell_nondegenerate
    assert canonical_functional(datum, space, seed=5) == phi


def test_unstable_functionals(unitary_m2):
    datum, space, _ = unitary_m2
    repeated = StableFunctional(forms=[np.diag([1, 1, 2]).tolist()])
    result = is_stable(datum, space, repeated)
    assert not result.stable and result.reason == "pencil has repeated degeneracy point"
    with pytest.raises(InapplicableError):
        expected_euler_characteristic(datum, space, repeated)

    wide = make_datum("2A", 4, 6)
    wide_space = build_space(wide, space.field)
    rank_deficient = StableFunctional(maps=[[[0, 0]]], forms=[[[1]]])
    assert is_stable(wide, wide_space, rank_deficient).reason == "rank"


@pytest.mark.parametrize("args,q", [(("C", 2, 4), 7), (("C", 2, 2), 7), (("B", 2, 4), 7), (("D", 3, 4), 7), (("A", 3, 3), 5)])
def test_canonical_functional_is_stable(args, q):
    datum = make_datum(*args)
    space = build_space(datum, get_field(q))
    phi = canonical_functional(datum, space)
    assert is_stable(datum, space, phi).stable


def test_degenerate_request_needs_unitary(f7):
    datum = make_datum("C", 2, 4)
    with pytest.raises(InvalidInputError):
        canonical_functional(datum, build_space(datum, f7), degenerate=True)
