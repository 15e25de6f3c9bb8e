"""
Trace functions S(t) = sum over the domain of chi(f'(v)) psi(f_phi(t, v)).

The t-loop uses the split f_phi(t, v) = t*g(v) + h(v): per chunk the
additive-character exponents Tr(a h) and the logarithms of a*g are computed
once, after which every t costs one table lookup per point.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterator, List, Optional, Sequence, Union

import numpy as np

from src.core.config import get_settings
from src.core.errors import ArityError, InvalidInputError
from src.core.models import Backend
from src.cyclofield.characters import AdditiveCharacter, MultiplicativeCharacter
from src.cyclofield.cyclosum import CharSumAccumulator, CycloSum
from src.cyclofield.field import Field
from src.quadform.models import GroupDatum, StableFunctional
from src.quadform.space import GradedQuadraticSpace
from src.quadform.stability import expected_shapes, is_stable
from src.sum_engine.families import DomainChunk, Evaluation, SumFamily, make_family
from src.sum_engine.models import (
    CharacterSpec,
    DomainPoint,
    Normalization,
    StabilityRecord,
    TraceEntry,
    TraceTable,
)


logger = logging.getLogger("klspark.engine")

SumValue = Union[CycloSum, complex]


def character_components(field: Field, datum: GroupDatum, chi: CharacterSpec) -> List[MultiplicativeCharacter]:
    """
    The characters chi_k matching the f' entries.

    Raises:
        ArityError: If the number of exponents does not match the f' arity
        InvalidInputError: If the sign component has order above two
    """
    if len(chi.exponents) != datum.chi_arity:
        raise ArityError(
            f"type {datum.type_tag.value} with l={datum.ell} needs {datum.chi_arity} character "
            f"exponents, got {len(chi.exponents)}"
        )
    components = [MultiplicativeCharacter(field, r) for r in chi.exponents]
    if datum.has_sign_component and components and not components[0].is_exact:
        raise InvalidInputError("the sign component chi_0 must have order at most two")
    return components


def backend_for(components: Sequence[MultiplicativeCharacter]) -> Backend:
    return Backend.EXACT if all(c.is_exact for c in components) else Backend.FLOAT


def character_weights(components: Sequence[MultiplicativeCharacter], f_prime: np.ndarray) -> np.ndarray:
    """prod_k chi_k(f'_k) row-wise; int64 when every component is exact."""
    weights: np.ndarray = np.ones(f_prime.shape[0], dtype=np.int64)
    for k, chi in enumerate(components):
        weights = weights * chi(f_prime[:, k])
    return weights


def _entry(t: int, value: SumValue) -> TraceEntry:
    if isinstance(value, CycloSum):
        z = value.to_complex()
        return TraceEntry(t=t, coeffs=value.to_list(), re=z.real, im=z.imag)
    return TraceEntry(t=t, coeffs=None, re=value.real, im=value.imag)


class TraceEngine:
    """
    Runs the sums of one (datum, space, phi, chi, psi) configuration.

    Stability of phi is recorded, never required.
    """

    def __init__(
        self,
        datum: GroupDatum,
        space: GradedQuadraticSpace,
        phi: StableFunctional,
        chi: Optional[CharacterSpec] = None,
        psi: Optional[AdditiveCharacter] = None,
        threads: Optional[int] = None,
        chunk_size: Optional[int] = None,
    ):
        settings = get_settings()
        self.datum = datum
        self.space = space
        self.field = space.field
        self.phi = phi
        self.chi = chi if chi is not None else CharacterSpec.trivial(datum.chi_arity)
        self.psi = psi if psi is not None else AdditiveCharacter(self.field, 1)
        self.threads = max(1, threads or settings.threads)
        self.chunk_size = chunk_size or settings.chunk_size
        self.logger = logger
        self.family: SumFamily = make_family(datum, space, phi)
        self.components = character_components(self.field, datum, self.chi)
        self.backend = backend_for(self.components)
        self.warnings: List[str] = []
        stability = is_stable(datum, space, phi)
        self.stability = StabilityRecord(stable=stability.stable, reason=stability.reason)
        if not stability.stable:
            message = f"phi is not stable ({stability.reason}); computing anyway"
            self.logger.warning(message)
            self.warnings.append(message)

    def evaluations(self) -> Iterator[Evaluation]:
        for chunk in self.family.chunks(self.chunk_size):
            yield self.family.evaluate(chunk)

    def _accumulator(self) -> CharSumAccumulator:
        return CharSumAccumulator(self.field, self.psi, self.backend)

    def _exponents(self, ev: Evaluation):
        """(weights, mask of g == 0, log(a*g), Tr(a*h)) of a chunk."""
        f = self.field
        weights = character_weights(self.components, ev.f_prime)
        zero = ev.g == 0
        scaled = f.mul(ev.g, self.psi.multiplier)
        logs = f.log_table[np.where(zero, 1, scaled)]
        return weights, zero, logs, self.psi.trace_of(ev.h)

    def _traces_at(self, t: int, zero: np.ndarray, logs: np.ndarray, trh: np.ndarray) -> np.ndarray:
        f = self.field
        tg = f.trace_table[f.exp_table[(int(f.log_table[t]) + logs) % (f.q - 1)]]
        return (np.where(zero, 0, tg) + trh) % f.p

    def trace_sum(self, t: int) -> SumValue:
        """S(t) for one t in F_q^x."""
        t = self._check_t(t)
        accumulator = self._accumulator()
        for ev in self.evaluations():
            weights, zero, logs, trh = self._exponents(ev)
            accumulator.add_traces(weights, self._traces_at(t, zero, logs, trh))
        return accumulator.result()

    def _check_t(self, t: int) -> int:
        t = int(t)
        if not 0 < t < self.field.q:
            raise InvalidInputError(f"t must be a nonzero element of F_{self.field.q}, got {t}")
        return t

    def trace_values(self, ts: Optional[Sequence[int]] = None) -> Dict[int, SumValue]:
        """S(t) for the given t (all of F_q^x by default), threads split over t."""
        ts = [self._check_t(t) for t in (ts if ts is not None else self.field.units().tolist())]
        if not ts:
            return {}
        accumulators = {t: self._accumulator() for t in ts}
        blocks = [b.tolist() for b in np.array_split(np.array(ts, dtype=np.int64), min(self.threads, len(ts))) if b.size]

        def run_block(block: List[int], weights, zero, logs, trh) -> None:
            for t in block:
                accumulators[t].add_traces(weights, self._traces_at(t, zero, logs, trh))

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            for ev in self.evaluations():
                exponents = self._exponents(ev)
                list(pool.map(lambda block: run_block(block, *exponents), blocks))
        return {t: accumulators[t].result() for t in ts}

    def _table(self, values: Dict[int, SumValue], domain_size: int) -> TraceTable:
        w = self.datum.weight
        return TraceTable(
            config=self.config_record(),
            field=self.field.spec,
            backend=self.backend,
            entries=[_entry(t, values[t]) for t in sorted(values)],
            stability=self.stability,
            normalization=Normalization(w=w, sign=-1 if w % 2 else 1, q=self.field.q),
            domain_size=domain_size,
            warnings=list(self.warnings),
        )

    def config_record(self) -> Dict:
        return {
            "datum": self.datum.model_dump(mode="json"),
            "phi": self.phi.model_dump(mode="json"),
            "chi": self.chi.exponents,
            "psi_multiplier": self.psi.multiplier,
        }

    def domain_size(self) -> int:
        return sum(len(chunk) for chunk in self.family.chunks(self.chunk_size))

    def trace_table(self) -> TraceTable:
        self.logger.info(
            f"Trace table for {self.datum.type_tag.value} n={self.datum.n} m={self.datum.m} "
            f"over F_{self.field.q} with {self.threads} thread(s)"
        )
        values = self.trace_values()
        return self._table(values, self.domain_size())

    def fiber_count_map(self) -> Dict[tuple, Union[int, complex]]:
        """N(a, b): chi-weighted number of points with g = a and h = b."""
        q = self.field.q
        keys_parts, sums_parts = [], []
        for ev in self.evaluations():
            weights = character_weights(self.components, ev.f_prime)
            keys = ev.g * q + ev.h
            unique, inverse = np.unique(keys, return_inverse=True)
            sums = np.zeros(unique.size, dtype=weights.dtype)
            np.add.at(sums, inverse, weights)
            keys_parts.append(unique)
            sums_parts.append(sums)
        if not keys_parts:
            return {}
        keys = np.concatenate(keys_parts)
        sums = np.concatenate(sums_parts)
        unique, inverse = np.unique(keys, return_inverse=True)
        totals = np.zeros(unique.size, dtype=sums.dtype)
        np.add.at(totals, inverse, sums)
        cast = int if np.issubdtype(totals.dtype, np.integer) else complex
        return {(int(k // q), int(k % q)): cast(v) for k, v in zip(unique, totals) if v != 0}

    def fiber_count_transform(self) -> TraceTable:
        """S(t) = sum N(a, b) psi(b + t*a), the aggregate-first path to the table."""
        counts = self.fiber_count_map()
        a = np.array([k[0] for k in counts], dtype=np.int64)
        b = np.array([k[1] for k in counts], dtype=np.int64)
        dtype = np.int64 if self.backend == Backend.EXACT else np.complex128
        weights = np.array(list(counts.values()), dtype=dtype)
        values = {}
        for t in self.field.units().tolist():
            accumulator = self._accumulator()
            if weights.size:
                accumulator.add_traces(weights, self.psi.trace_of(self.field.add(b, self.field.mul(a, t))))
            values[t] = accumulator.result()
        return self._table(values, self.domain_size())

    def fiber_counts(self) -> Dict[int, Union[int, complex]]:
        """N(a): the marginal of N(a, b) over b."""
        marginal: Dict[int, Union[int, complex]] = {}
        for (a, _), value in self.fiber_count_map().items():
            marginal[a] = marginal.get(a, 0) + value
        return {a: v for a, v in sorted(marginal.items()) if v != 0}

    def t_sum(self) -> SumValue:
        """sum over t in F_q^x of S(t), as sum chi(f') psi(h) (q [g = 0] - 1)."""
        q = self.field.q
        accumulator = self._accumulator()
        for ev in self.evaluations():
            weights = character_weights(self.components, ev.f_prime)
            factor = np.where(ev.g == 0, q - 1, -1)
            accumulator.add_traces(weights * factor, self.psi.trace_of(ev.h))
        return accumulator.result()


def enumerate_domain(datum: GroupDatum, space: GradedQuadraticSpace, chunk_size: Optional[int] = None) -> Iterator[DomainPoint]:
    """Each point of the domain once, with its cached block values."""
    family = make_family(datum, space)
    for chunk in family.chunks(chunk_size or get_settings().chunk_size):
        yield from chunk.points()


def _evaluate_point(datum, space, phi, point: DomainPoint) -> Evaluation:
    family = make_family(datum, space, phi)
    chunk = family.prepare(DomainChunk.from_points([point], space.dim))
    return family.evaluate(chunk)


def f_phi_eval(datum: GroupDatum, space: GradedQuadraticSpace, phi: StableFunctional, point: DomainPoint, x: int) -> int:
    """
    f_phi(x, point).

    Raises:
        InvariantViolation: If a denominator vanishes at the point
    """
    ev = _evaluate_point(datum, space, phi, point)
    f = space.field
    return int(f.add(f.mul(ev.g, int(x)), ev.h)[0])


def f_prime_eval(datum: GroupDatum, space: GradedQuadraticSpace, point: DomainPoint) -> List[int]:
    """f'(point) as field elements; the sign entry is -1 = q - 1."""
    zero_phi = _zero_functional(datum)
    return _evaluate_point(datum, space, zero_phi, point).f_prime[0].tolist()


def _zero_functional(datum: GroupDatum) -> StableFunctional:
    map_shapes, form_sizes = expected_shapes(datum)
    return StableFunctional.from_arrays(
        [np.zeros(s, dtype=np.int64) for s in map_shapes],
        [np.zeros((k, k), dtype=np.int64) for k in form_sizes],
        source="explicit",
    )


def trace_sum(datum, space, phi, chi: Optional[CharacterSpec], psi: Optional[AdditiveCharacter], t: int, **kwargs) -> SumValue:
    return TraceEngine(datum, space, phi, chi, psi, **kwargs).trace_sum(t)


def trace_table(datum, space, phi, chi=None, psi=None, **kwargs) -> TraceTable:
    return TraceEngine(datum, space, phi, chi, psi, **kwargs).trace_table()


def fiber_count_transform(datum, space, phi, chi=None, psi=None, **kwargs) -> TraceTable:
    return TraceEngine(datum, space, phi, chi, psi, **kwargs).fiber_count_transform()


def fiber_counts(datum, space, phi, chi=None, **kwargs) -> Dict[int, Union[int, complex]]:
    return TraceEngine(datum, space, phi, chi, **kwargs).fiber_counts()


def t_sum(datum, space, phi, chi=None, psi=None, **kwargs) -> SumValue:
    return TraceEngine(datum, space, phi, chi, psi, **kwargs).t_sum()


def normalized_trace(value: SumValue, w: int, q: int) -> complex:
    """(-1)^w q^(-w/2) S."""
    z = value.to_complex() if isinstance(value, CycloSum) else complex(value)
    return (-1) ** w * float(q) ** (-w / 2) * z
