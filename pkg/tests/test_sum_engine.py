import itertools

import numpy as np
import pytest

from src.core.errors import ArityError, DegenerateInputError, InvalidInputError
from src.core.models import Backend
from src.cyclofield.characters import AdditiveCharacter
from src.cyclofield.cyclosum import CycloSum
from src.cyclofield.field import get_field
from src.quadform.datum import make_datum
from src.quadform.models import StableFunctional
from src.quadform.space import build_space
from src.quadform.stability import canonical_functional
from src.sum_engine.engine import (
    TraceEngine,
    enumerate_domain,
    f_phi_eval,
    f_prime_eval,
    normalized_trace,
)
from src.sum_engine.kloosterman import classical_kloosterman
from src.sum_engine.models import CSV_COLUMNS, CharacterSpec


def _setup(type_tag, n, m, q):
    datum = make_datum(type_tag, n, m)
    space = build_space(datum, get_field(q))
    return datum, space, canonical_functional(datum, space)


def brute_force_unitary_m2(field, diagonal, t):
    """S(t) over P^2 with q = sum v_i^2 / 2 and phi = sum d_i v_i^2 / 2, prime field only."""
    p = field.p
    counts = np.zeros(p, dtype=np.int64)
    for v in itertools.product(range(p), repeat=len(diagonal)):
        nonzero = [x for x in v if x]
        if not nonzero or nonzero[0] != 1:
            continue
        q_v = sum(x * x for x in v) % p
        if q_v == 0:
            continue
        phi_v = sum(d * x * x for d, x in zip(diagonal, v)) % p
        counts[(t * phi_v * pow(q_v, -1, p)) % p] += 1
    return CycloSum(p, counts)


def test_unitary_m2_matches_brute_force(unitary_m2, f7):
    datum, space, phi = unitary_m2
    engine = TraceEngine(datum, space, phi, threads=1)
    for t in (1, 3, 6):
        assert engine.trace_sum(t) == brute_force_unitary_m2(f7, [1, 2, 3], t)


def test_trace_table_shape_and_metadata(unitary_m2):
    datum, space, phi = unitary_m2
    table = TraceEngine(datum, space, phi).trace_table()
    assert list(table.ts()) == [1, 2, 3, 4, 5, 6]
    assert table.backend == Backend.EXACT
    assert table.stability.stable
    assert table.normalization.w == 2 and table.normalization.sign == 1
    assert table.domain_size == 57 - 8
    assert all(entry.coeffs is not None for entry in table.entries)
    assert np.allclose(table.normalized(), table.values() / 7)
    assert list(table.csv_rows()[0]) == CSV_COLUMNS
    assert table.config["chi"] == [0]


def test_thread_count_and_chunking_do_not_change_the_table(unitary_m2):
    datum, space, phi = unitary_m2
    one = TraceEngine(datum, space, phi, threads=1).trace_table()
    many = TraceEngine(datum, space, phi, threads=3, chunk_size=7).trace_table()
    assert one.exact_coeffs() == many.exact_coeffs()


def test_psi_multiplier_rescales_t(unitary_m2, f7):
    datum, space, phi = unitary_m2
    base = TraceEngine(datum, space, phi).trace_values()
    scaled = TraceEngine(datum, space, phi, psi=AdditiveCharacter(f7, 3)).trace_values()
    for t in range(1, 7):
        assert scaled[t] == base[int(f7.mul(3, t))]


@pytest.mark.parametrize("n,q", [(2, 7), (3, 5), (4, 3)])
def test_split_type_gives_classical_kloosterman(n, q):
    datum, space, phi = _setup("A", n, n, q)
    psi = AdditiveCharacter(space.field, 1)
    values = TraceEngine(datum, space, phi).trace_values()
    for t, value in values.items():
        assert value == classical_kloosterman(n, t, psi)


def test_kloosterman_baseline(f7, psi7):
    assert classical_kloosterman(1, 3, psi7) == CycloSum.zeta(7, 3)
    kl2 = classical_kloosterman(2, 1, psi7)
    assert abs(kl2.to_complex().imag) < 1e-9
    assert abs(kl2) <= 2 * np.sqrt(7) + 1e-9
    with pytest.raises(DegenerateInputError):
        classical_kloosterman(2, 0, psi7)


@pytest.mark.parametrize("args,q", [
    (("2A", 4, 6), 5),
    (("2A", 3, 2), 7),
    (("C", 2, 4), 5),
    (("C", 2, 2), 3),
    (("B", 2, 4), 5),
    (("D", 3, 4), 5),
    (("A", 3, 3), 5),
])
def test_fiber_count_transform_equals_direct_sum(args, q):
    datum, space, phi = _setup(*args, q)
    engine = TraceEngine(datum, space, phi)
    assert engine.trace_table().exact_coeffs() == engine.fiber_count_transform().exact_coeffs()


@pytest.mark.parametrize("args,q", [(("2A", 4, 6), 5), (("C", 2, 4), 5), (("B", 2, 4), 5)])
def test_t_sum_is_sum_of_table(args, q):
    datum, space, phi = _setup(*args, q)
    engine = TraceEngine(datum, space, phi)
    total = sum(engine.trace_values().values(), CycloSum.zero(space.field.p))
    assert engine.t_sum() == total


def test_fiber_counts_cover_the_domain():
    datum, space, phi = _setup("2A", 4, 6, 5)
    engine = TraceEngine(datum, space, phi)
    assert sum(engine.fiber_counts().values()) == engine.domain_size()


def test_floating_backend_agrees_with_fiber_transform():
    datum, space, phi = _setup("2A", 4, 6, 7)
    chi = CharacterSpec(exponents=[3, 2])
    engine = TraceEngine(datum, space, phi, chi)
    assert engine.backend == Backend.FLOAT
    direct = engine.trace_table()
    assert direct.exact_coeffs() is None
    assert np.allclose(direct.values(), engine.fiber_count_transform().values(), atol=1e-9)
    total = sum(engine.trace_values().values())
    assert abs(engine.t_sum() - total) < 1e-8


def test_character_arity_and_sign_component(unitary_m2, f7):
    datum, space, phi = unitary_m2
    with pytest.raises(ArityError):
        TraceEngine(datum, space, phi, CharacterSpec(exponents=[0, 0]))
    with pytest.raises(InvalidInputError):
        TraceEngine(datum, space, phi, CharacterSpec(exponents=[1]))
    sign = TraceEngine(datum, space, phi, CharacterSpec(exponents=[3]))
    assert sign.backend == Backend.EXACT


def test_sign_character_on_unitary_m2_flips_the_sum(unitary_m2):
    # f' is the constant -1 and -1 is a non-square mod 7
    datum, space, phi = unitary_m2
    plain = TraceEngine(datum, space, phi).trace_sum(2)
    twisted = TraceEngine(datum, space, phi, CharacterSpec(exponents=[3])).trace_sum(2)
    assert twisted == -plain


def test_unstable_functional_is_computed_with_a_warning(unitary_m2):
    datum, space, _ = unitary_m2
    phi = StableFunctional(forms=[np.diag([1, 1, 2]).tolist()])
    engine = TraceEngine(datum, space, phi)
    table = engine.trace_table()
    assert not table.stability.stable
    assert any("not stable" in w for w in table.warnings)
    assert len(table.entries) == 6


def test_t_must_be_a_unit(unitary_m2):
    datum, space, phi = unitary_m2
    with pytest.raises(InvalidInputError):
        TraceEngine(datum, space, phi).trace_sum(0)


def test_domain_points_and_point_evaluation(unitary_m2):
    datum, space, phi = unitary_m2
    points = list(enumerate_domain(datum, space))
    assert len(points) == 49
    point = points[0]
    assert f_prime_eval(datum, space, point) == [6]
    g = f_phi_eval(datum, space, phi, point, 1)
    assert f_phi_eval(datum, space, phi, point, 0) == 0
    assert f_phi_eval(datum, space, phi, point, 2) == (2 * g) % 7


def test_symplectic_domain_starts_with_zero_tensor():
    datum, space, _ = _setup("C", 2, 4, 3)
    first = next(enumerate_domain(datum, space))
    assert first.is_zero_tensor
    assert first.vector == [0, 0, 0, 0]


def test_normalized_trace():
    value = CycloSum.integer(5, 10)
    assert normalized_trace(value, 2, 5) == pytest.approx(2.0)
    assert normalized_trace(3 + 0j, 1, 9) == pytest.approx(-1.0)


@pytest.mark.parametrize("type_tag,n,m,q", [("B", 2, 4, 5), ("B", 3, 2, 5), ("D", 4, 4, 3)])
def test_orthogonal_domain_points_carry_their_cache(type_tag, n, m, q):
    datum = make_datum(type_tag, n, m)
    space = build_space(datum, get_field(q))
    points = list(enumerate_domain(datum, space))
    assert points
    for point in points[:50]:
        assert point.cache["q_total"] == 0
        assert len(point.cache["q"]) == datum.ell
        assert all(value != 0 for value in point.cache["q"])
        assert int(space.quadratic(np.array([point.vector]))[0]) == 0
    assert int(f_prime_eval(datum, space, points[0])[0]) == q - 1
