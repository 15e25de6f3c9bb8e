"""
Verification suites behind the `verify` command.

Each suite takes a RunConfig and returns a SuiteReport. Configurations a
suite does not apply to raise InapplicableError; failed checks are report
entries with status fail.
"""

import logging
from typing import Callable, Dict

import numpy as np

from src.cli.context import RunContext, build_context
from src.cli.models import RunConfig, Suite
from src.core.errors import InapplicableError, InvalidInputError
from src.core.models import GroupType, VerificationStatus
from src.quadform.datum import MIN_N
from src.quadform.stability import is_stable
from src.sum_engine.engine import TraceEngine
from src.verify.euler import euler_characteristic_estimate
from src.verify.models import CONTROL_THRESHOLD, SuiteReport
from src.verify.purity import purity_check
from src.verify.reconstruction import reconstruction_report
from src.verify.span import random_control, roots_from_pencil, span_test_even_unitary, span_test_odd_unitary
from src.weylcomb.consistency import consistency_check


logger = logging.getLogger("klspark.verify")


def _engine(ctx: RunContext) -> TraceEngine:
    return TraceEngine(ctx.datum, ctx.space, ctx.phi, ctx.chi, ctx.psi, threads=ctx.config.threads)


def _pencil_roots(ctx: RunContext):
    result = is_stable(ctx.datum, ctx.space, ctx.phi)
    if result.pencil is None:
        raise InapplicableError(f"type {ctx.datum.type_tag.value} has no pencil of quadrics")
    return roots_from_pencil(result.pencil, ctx.datum.n)


def _span_suite(ctx: RunContext, name: str, span_test: Callable) -> SuiteReport:
    if ctx.datum.type_tag != GroupType.UNITARY or ctx.datum.m != 2:
        raise InapplicableError(f"{name} applies to unitary data with m = 2")
    roots = _pencil_roots(ctx)
    engine = _engine(ctx)
    table = engine.trace_table()
    test = span_test(table, roots)
    control = span_test(table, roots, trivial_control=True)
    noise = random_control(table, roots, seed=ctx.config.seed)
    warnings = list(engine.warnings)
    control_rejected = control.relative_residual > CONTROL_THRESHOLD
    if not test.determined:
        warnings.append(f"the basis spans all of C^{test.samples}; the span test does not constrain S(t)")
    status = VerificationStatus.PASS if test.passed and control_rejected else VerificationStatus.FAIL
    return SuiteReport(
        suite=name,
        status=status,
        metrics={
            "relative_residual": test.relative_residual,
            "control_relative_residual": control.relative_residual,
            "random_relative_residual": noise.relative_residual,
            "roots": roots,
        },
        details={
            "span_test": test.model_dump(mode="json"),
            "trivial_control": control.model_dump(mode="json"),
            "random_control": noise.model_dump(mode="json"),
        },
        message=None if status == VerificationStatus.PASS else (
            "S(t) is outside the model span" if not test.passed else "the trivial-character control was not rejected"
        ),
        warnings=warnings,
    )


def _um2_odd(ctx: RunContext) -> SuiteReport:
    return _span_suite(ctx, Suite.UM2_ODD.value, span_test_odd_unitary)


def _um2_even(ctx: RunContext) -> SuiteReport:
    return _span_suite(ctx, Suite.UM2_EVEN.value, span_test_even_unitary)


def _purity(ctx: RunContext) -> SuiteReport:
    engine = _engine(ctx)
    table = engine.trace_table()
    result = purity_check(table, ctx.datum.standard_rank)
    status = VerificationStatus.PASS if result.passed else VerificationStatus.FAIL
    return SuiteReport(
        suite=Suite.PURITY.value,
        status=status,
        metrics={"max_ratio": result.max_ratio, "rank": result.rank, "w": result.w},
        details={"purity": result.model_dump(mode="json")},
        message=None if result.passed else f"max ratio {result.max_ratio:.6f} exceeds rank {result.rank}",
        warnings=list(engine.warnings),
    )


def _euler(ctx: RunContext) -> SuiteReport:
    estimate = euler_characteristic_estimate(
        ctx.datum, ctx.space, ctx.phi, ctx.chi, ctx.psi, k_max=ctx.config.k_max, threads=ctx.config.threads
    )
    messages = {
        VerificationStatus.FAIL: f"exponential count {estimate.estimate} differs from the predicted {estimate.expected}",
        VerificationStatus.INCONCLUSIVE: "no clear singular-value gap or non-integral amplitudes; the vanishing hypothesis is not confirmed",
        VerificationStatus.PARTIAL: f"only {estimate.k_achieved} of {estimate.k_max} power sums fit the budget",
    }
    return SuiteReport(
        suite=Suite.EULER.value,
        status=estimate.status,
        metrics={
            "estimate": estimate.estimate,
            "hankel_rank": estimate.hankel_rank,
            "expected": estimate.expected,
            "gap": estimate.gap,
            "singular_values": estimate.singular_values,
        },
        details={"prony": estimate.model_dump(mode="json")},
        message=messages.get(estimate.status),
    )


def _reconstruction(ctx: RunContext) -> SuiteReport:
    report = reconstruction_report(ctx.datum, ctx.space, limit=ctx.config.limit, phi=ctx.phi, seed=ctx.config.seed)
    failing = sorted({name for r in report.mismatches for name in r.failures})
    return SuiteReport(
        suite=Suite.RECONSTRUCTION.value,
        status=report.status,
        metrics={"points": report.points, "mismatches": len(report.mismatches), "exhaustive": report.exhaustive},
        details={"mismatches": [r.model_dump(mode="json") for r in report.mismatches[:20]]},
        message=f"failed identities: {', '.join(failing)}" if failing else None,
    )


def _consistency(config: RunConfig) -> SuiteReport:
    n_max = config.n_max or config.n
    if n_max is None:
        raise InvalidInputError("consistency needs --n-max or --n")
    start = MIN_N.get(config.type_tag, 1) if config.n_max else n_max
    reports = [consistency_check(config.type_tag, n, oracle=config.oracle) for n in range(start, n_max + 1)]
    rows = [(r.n, row) for r in reports for row in r.rows]
    failed = [f"n={n} m={row.m} d={row.d}: {'; '.join(row.failures)}" for n, row in rows if not row.passed]
    return SuiteReport(
        suite=Suite.CONSISTENCY.value,
        status=VerificationStatus.FAIL if failed else VerificationStatus.PASS,
        metrics={"rows": len(rows), "failures": len(failed)},
        details={"reports": [r.model_dump(mode="json") for r in reports]},
        message="; ".join(failed) if failed else None,
    )


def _ft_identity(ctx: RunContext) -> SuiteReport:
    engine = _engine(ctx)
    direct = engine.trace_table()
    transformed = engine.fiber_count_transform()
    exact = direct.exact_coeffs()
    if exact is not None:
        equal = exact == transformed.exact_coeffs()
        deviation = 0.0 if equal else float(np.max(np.abs(direct.values() - transformed.values())))
    else:
        deviation = float(np.max(np.abs(direct.values() - transformed.values()))) if direct.entries else 0.0
        equal = deviation <= 1e-9 * max(1.0, float(np.max(np.abs(direct.values()))))
    return SuiteReport(
        suite=Suite.FT_IDENTITY.value,
        status=VerificationStatus.PASS if equal else VerificationStatus.FAIL,
        metrics={"backend": direct.backend.value, "max_deviation": deviation, "entries": len(direct.entries)},
        message=None if equal else "the fiber-count transform differs from the direct trace table",
        warnings=list(engine.warnings),
    )


CONTEXT_SUITES: Dict[Suite, Callable[[RunContext], SuiteReport]] = {
    Suite.UM2_ODD: _um2_odd,
    Suite.UM2_EVEN: _um2_even,
    Suite.PURITY: _purity,
    Suite.EULER: _euler,
    Suite.RECONSTRUCTION: _reconstruction,
    Suite.FT_IDENTITY: _ft_identity,
}


def run_suite(config: RunConfig) -> SuiteReport:
    """
    Run the suite named in config.

    Raises:
        InvalidInputError: If no suite is named or the configuration is malformed
        InapplicableError: If the suite does not apply to the configuration
    """
    if config.suite is None:
        raise InvalidInputError("verify needs a suite")
    logger.info(f"Running verify suite {config.suite.value}")
    if config.suite == Suite.CONSISTENCY:
        report = _consistency(config)
    else:
        ctx = build_context(config)
        report = CONTEXT_SUITES[config.suite](ctx)
        report.warnings = ctx.warnings + report.warnings
    logger.info(f"Suite {report.suite}: {report.status.value}")
    return report
