import numpy as np
import pytest

from src.cli.models import RunConfig
from src.core.errors import BudgetExceeded, InapplicableError, InvalidInputError
from src.core.models import Backend, FieldSpec, VerificationStatus
from src.cyclofield.field import get_field
from src.quadform.datum import make_datum
from src.quadform.space import build_space
from src.quadform.stability import canonical_functional
from src.sum_engine.engine import TraceEngine, enumerate_domain
from src.sum_engine.models import Normalization, StabilityRecord, TraceEntry, TraceTable
from src.verify import (
    euler_characteristic_estimate,
    purity_check,
    random_control,
    reconstruction_oracle,
    reconstruction_report,
    span_test_even_unitary,
    span_test_odd_unitary,
)
from src.verify.euler import check_level_budget, hankel_matrix, multiplicity_count, numerical_rank, prony_fit
from src.verify.reconstruction import in_symplectic_algebra
from src.verify.span import check_roots
from src.verify.suites import run_suite


def verify_config(suite, **kwargs):
    return RunConfig(command="verify", suite=suite, **kwargs)


def synthetic_table(values, w=2, p=7, e=1):
    q = p ** e
    return TraceTable(
        field=FieldSpec(p=p, e=e),
        backend=Backend.FLOAT,
        entries=[TraceEntry(t=k + 1, re=z.real, im=z.imag) for k, z in enumerate(values)],
        stability=StabilityRecord(stable=True),
        normalization=Normalization(w=w, sign=1, q=q),
    )


def test_odd_unitary_span(unitary_m2):
    datum, space, phi = unitary_m2
    table = TraceEngine(datum, space, phi).trace_table()
    result = span_test_odd_unitary(table, [1, 2, 3])
    assert result.passed and result.determined
    assert result.basis_size == 4 and result.samples == 6
    control = span_test_odd_unitary(table, [1, 2, 3], trivial_control=True)
    assert control.relative_residual > 0.1
    assert random_control(table, [1, 2, 3], seed=1).relative_residual > 0.1


def test_span_tests_check_applicability(unitary_m2):
    datum, space, phi = unitary_m2
    table = TraceEngine(datum, space, phi).trace_table()
    with pytest.raises(InapplicableError, match="even n"):
        span_test_even_unitary(table, [1, 2, 3])
    with pytest.raises(InapplicableError, match="repeated"):
        span_test_odd_unitary(table, [1, 1, 3])
    with pytest.raises(InapplicableError):
        span_test_odd_unitary(table, [1, 2, None])


def test_check_roots(f7):
    assert check_roots(f7, [3, 1, 2], 3) == [3, 1, 2]
    with pytest.raises(InapplicableError, match="only 2 of the 3"):
        check_roots(f7, [1, 2], 3)
    with pytest.raises(InvalidInputError):
        check_roots(f7, [1, 2, 9], 3)


def test_um2_odd_suite():
    report = run_suite(verify_config("um2-odd", type_tag="2A", n=3, q=7))
    assert report.status == VerificationStatus.PASS
    assert report.metrics["roots"] == [1, 2, 3]
    assert report.metrics["relative_residual"] < 1e-6
    assert report.metrics["control_relative_residual"] > 0.1


def test_um2_even_suite():
    report = run_suite(verify_config("um2-even", type_tag="2A", n=4, q=7))
    assert report.status == VerificationStatus.PASS, report.message
    assert report.metrics["roots"] == [1, 2, 3, 4]
    assert report.details["span_test"]["basis_size"] == 2


@pytest.mark.parametrize("q", [5, 7])
def test_um2_even_rejects_the_trivial_control(q):
    report = run_suite(verify_config("um2-even", type_tag="2A", n=4, q=q))
    assert report.status == VerificationStatus.PASS, report.message
    assert report.metrics["relative_residual"] < 1e-6
    assert report.metrics["control_relative_residual"] > 0.1
    assert sorted(report.metrics["roots"]) == [1, 2, 3, 4]


@pytest.mark.parametrize("suite,kwargs", [
    ("um2-odd", {"type_tag": "2A", "n": 4, "q": 7}),
    ("um2-odd", {"type_tag": "C", "n": 2, "m": 4, "q": 7}),
    ("euler", {"type_tag": "C", "n": 2, "m": 4, "q": 7}),
    ("reconstruction", {"type_tag": "A", "n": 3, "m": 3, "q": 5}),
])
def test_inapplicable_suites(suite, kwargs):
    with pytest.raises(InapplicableError):
        run_suite(verify_config(suite, **kwargs))


def test_purity_on_synthetic_tables():
    assert purity_check(synthetic_table([7.0 + 0j, -14.0 + 0j]), rank=2).passed
    result = purity_check(synthetic_table([7.0 + 0j, 22.0 + 0j]), rank=3)
    assert not result.passed
    assert result.max_ratio == pytest.approx(22 / 7)
    assert purity_check(synthetic_table([3.0 + 0j], w=1, p=3, e=2), rank=1).passed


@pytest.mark.parametrize("q", [5, 7, 11])
def test_unitary_purity_suite(q):
    report = run_suite(verify_config("purity", type_tag="2A", n=3, m=2, q=q))
    assert report.status == VerificationStatus.PASS, report.message
    assert report.metrics["rank"] == 3
    assert report.metrics["max_ratio"] <= 3


@pytest.mark.parametrize("n,q", [(3, 7), (4, 5)])
def test_split_purity_suite(n, q):
    report = run_suite(verify_config("purity", type_tag="A", n=n, m=n, q=q))
    assert report.status == VerificationStatus.PASS
    assert report.metrics["rank"] == n and report.metrics["w"] == n - 1


@pytest.mark.parametrize("kwargs", [
    {"type_tag": "C", "n": 2, "m": 4, "q": 5},
    {"type_tag": "2A", "n": 4, "m": 6, "q": 5, "chi": [2, 1]},
    {"type_tag": "B", "n": 2, "m": 4, "q": 5},
])
def test_ft_identity_suite(kwargs):
    report = run_suite(verify_config("ft-identity", **kwargs))
    assert report.status == VerificationStatus.PASS
    assert report.metrics["max_deviation"] <= 1e-9


def test_consistency_suite():
    report = run_suite(verify_config("consistency", type_tag="C", n_max=3))
    assert report.status == VerificationStatus.PASS
    assert report.metrics["failures"] == 0
    assert report.metrics["rows"] == 1 + 2 + 2
    with pytest.raises(InvalidInputError):
        run_suite(verify_config("consistency", type_tag="C"))


def test_suite_is_required():
    with pytest.raises(InvalidInputError):
        run_suite(RunConfig(command="verify", type_tag="2A", n=3, m=2, q=7))


def test_euler_characteristic_of_a_single_exponential():
    # the t-sum is -1 at every level here, so N_k = 1 and the Hankel rank is 1
    datum = make_datum("2A", 3, 6)
    space = build_space(datum, get_field(3))
    phi = canonical_functional(datum, space)
    estimate = euler_characteristic_estimate(datum, space, phi, k_max=4, threads=1)
    assert estimate.k_achieved == 4
    assert np.allclose([complex(*s) for s in estimate.power_sums], 1)
    assert estimate.estimate == 1 and estimate.expected == 1
    assert estimate.hankel_rank == 1
    assert estimate.confident
    assert estimate.status == VerificationStatus.PASS


def test_euler_budget_gives_partial():
    datum = make_datum("2A", 3, 6)
    space = build_space(datum, get_field(3))
    phi = canonical_functional(datum, space)
    estimate = euler_characteristic_estimate(datum, space, phi, k_max=4, budget=100)
    assert estimate.status == VerificationStatus.PARTIAL
    assert estimate.k_achieved == 1
    assert estimate.estimate is None


def test_level_budget_guard():
    check_level_budget(27, 13, 0, 100)
    with pytest.raises(BudgetExceeded, match="over the budget"):
        check_level_budget(27, 13, 90, 100)


def test_euler_guards(unitary_m2):
    datum, space, phi = unitary_m2
    with pytest.raises(InvalidInputError, match="2\\(d \\+ 1\\)"):
        euler_characteristic_estimate(datum, space, phi, k_max=3)
    symplectic = make_datum("C", 2, 4)
    symplectic_space = build_space(symplectic, space.field)
    with pytest.raises(InapplicableError):
        euler_characteristic_estimate(symplectic, symplectic_space, canonical_functional(symplectic, symplectic_space))


def test_hankel_rank_and_prony_fit():
    z = np.array([0.5 + 0.5j, -0.3])
    a = np.array([2.0, 1.0])
    k = np.arange(1, 9)[:, None]
    signal = (a[None, :] * z[None, :] ** k).sum(axis=1)
    assert hankel_matrix(signal).shape == (4, 5)
    rank, gap = numerical_rank(np.linalg.svd(hankel_matrix(signal), compute_uv=False))
    assert rank == 2 and gap > 1e3
    frequencies, amplitudes = prony_fit(signal, 2)
    order = np.argsort(-np.abs(z))
    assert np.allclose(frequencies, z[order], atol=1e-8)
    assert np.allclose(amplitudes, a[order], atol=1e-8)
    assert numerical_rank(np.zeros(3)) == (0, None)


@pytest.mark.parametrize("args,q", [
    (("2A", 3, 6), 5),
    (("2A", 4, 6), 3),
    (("C", 2, 4), 5),
    (("C", 2, 2), 3),
    (("B", 2, 4), 5),
    (("B", 3, 2), 3),
    (("D", 3, 4), 3),
])
def test_reconstruction_is_exhaustively_consistent(args, q):
    datum = make_datum(*args)
    space = build_space(datum, get_field(q))
    report = reconstruction_report(datum, space, seed=2)
    assert report.exhaustive
    assert report.status == VerificationStatus.PASS, [r.failures for r in report.mismatches[:3]]
    assert report.points == len(list(enumerate_domain(datum, space)))


def test_reconstruction_sampling_and_single_points(unitary_m2):
    datum, space, phi = unitary_m2
    sample = reconstruction_report(datum, space, limit=10, phi=phi, seed=4)
    assert sample.points == 10 and not sample.exhaustive
    point = next(enumerate_domain(datum, space))
    result = reconstruction_oracle(datum, space, point, phi=phi)
    assert result.match
    assert result.f_prime_oracle == result.f_prime_formula
    assert result.rank_a_minus_b == 1


def test_reconstruction_suite():
    report = run_suite(verify_config("reconstruction", type_tag="C", n=2, m=2, q=5, limit=50))
    assert report.status == VerificationStatus.PASS, report.message
    assert report.metrics["points"] == 50


@pytest.mark.slow
@pytest.mark.parametrize("phi,expected", [("canonical", 3), ("canonical-degenerate", 2)])
def test_euler_characteristic_of_the_m2_sheaf(phi, expected):
    report = run_suite(verify_config("euler", type_tag="2A", n=3, m=2, q=3, k_max=8, phi=phi))
    assert report.status == VerificationStatus.PASS, report.message
    assert report.metrics["estimate"] == expected
    assert report.metrics["gap"] >= 10


def test_repeated_eigenvalues_count_with_multiplicity():
    # 2 (3^-1/2)^k + (-3^-1/2)^k: two distinct eigenvalues, three exponentials
    z = np.array([3 ** -0.5, -(3 ** -0.5)])
    k = np.arange(1, 9)[:, None]
    signal = (np.array([2.0, 1.0])[None, :] * z[None, :] ** k).sum(axis=1).astype(np.complex128)
    rank, gap = numerical_rank(np.linalg.svd(hankel_matrix(signal), compute_uv=False))
    assert rank == 2 and gap > 10
    _, amplitudes = prony_fit(signal, rank)
    assert multiplicity_count(amplitudes) == 3


def test_multiplicity_count_needs_positive_integers():
    assert multiplicity_count(np.array([1.0 + 0j, 2.02 - 0.01j])) == 3
    assert multiplicity_count(np.array([1.0, 0.5])) is None
    assert multiplicity_count(np.array([2.0, -1.0])) is None
    assert multiplicity_count(np.array([1.0 + 0.3j])) is None


def test_symplectic_algebra_membership(f7):
    gram = np.array([[0, 1], [6, 0]])
    assert in_symplectic_algebra(f7, np.array([[0, 1], [0, 0]]), gram)
    assert in_symplectic_algebra(f7, np.array([[2, 0], [0, 5]]), gram)
    assert not in_symplectic_algebra(f7, np.eye(2, dtype=np.int64), gram)


def test_symplectic_points_pass_every_identity():
    datum = make_datum("C", 2, 4)
    space = build_space(datum, get_field(5))
    points = [p for p in enumerate_domain(datum, space) if not p.is_zero_tensor][:25]
    for point in points:
        result = reconstruction_oracle(datum, space, point, seed=1)
        assert result.checks["omega(Cx, y) + omega(x, Cy) = 0"]
        assert result.match, result.failures
