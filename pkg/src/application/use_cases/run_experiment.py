import json
import logging
import math
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from src.application.dtos.experiment_dtos import (
    ComplexValue,
    ExperimentConfig,
    ExperimentKind,
    ExperimentSummary,
    ObservableSpec,
)
from src.application.interfaces.i_result_repository import IResultRepository, SeriesRow
from src.application.services.averaging_service import (
    AveragingService,
    level_vectors,
    kronecker_rotation,
)
from src.application.services.kernels import lambda_observable_sequence
from src.domain.entities.average_series import AverageSeries
from src.domain.entities.nilsystem_model import NilsystemModel
from src.domain.entities.observable import Observable, ObservableKind
from src.domain.entities.poly_sequence import PolySequence
from src.domain.entities.prime_table import PrimeTable
from src.domain.exceptions.domain_exceptions import (
    ArgumentRangeError,
    InvalidExperimentConfigError,
    ModelMismatchError,
    NegativeExponentError,
    ResourceGuardError,
)
from src.domain.services.nilsystem import IrrationalName, irrational_const, random_element, reduce
from src.domain.services.observables import space_mean
from src.domain.services.primes import make_w, omega_growth_admissible, sieve
from src.domain.value_objects.group_element import GroupElement, ModelKind
from src.domain.value_objects.unit_frac import MASK, fixed_from_number
from src.domain.value_objects.w_data import MAX_ENUMERATED_W, WData

logger = logging.getLogger(__name__)

QUADRATURE_GRID = 64
SMALL_QUADRATURE_GRID = 16


def load_experiment_config(path: Path) -> ExperimentConfig:
    """Read and validate an experiment description from a JSON file."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InvalidExperimentConfigError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InvalidExperimentConfigError(f"Malformed JSON in {path}: {e}") from e
    return parse_experiment_config(raw)


def parse_experiment_config(raw: Any) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise InvalidExperimentConfigError(f"Invalid experiment description:\n{e}") from e


def coordinate_numerator(value: int | float | str) -> int:
    """Fixed-point numerator of a named constant, a 'p/q' string or a number."""
    if isinstance(value, str) and value in {n.value for n in IrrationalName}:
        return irrational_const(value).value
    return fixed_from_number(value)


def build_element(kind: ModelKind, coords: list) -> GroupElement:
    numerators = tuple(coordinate_numerator(c) for c in coords)
    if kind is ModelKind.TORUS:
        return GroupElement(kind, tuple(c & MASK for c in numerators))
    return GroupElement(kind, numerators)


def build_observable(spec: ObservableSpec) -> Observable:
    if spec.kind == "torus-character":
        return Observable.torus_character(spec.k)
    if spec.kind == "heis-horizontal":
        return Observable.heis_horizontal(spec.k[0], spec.k[1])
    if spec.kind == "heis-theta":
        return Observable.heis_theta(spec.truncation)
    return Observable.constant(spec.value)


def observable_cost(obs: Observable) -> int:
    """Relative cost of one evaluation (theta sums 2K+1 terms)."""
    if obs.kind is ObservableKind.HEIS_THETA:
        return 2 * obs.truncation + 1
    return 1


def _c(value: complex) -> dict[str, float]:
    return {"re": value.real, "im": value.imag}


@dataclass(frozen=True)
class ResourceLimits:
    max_sieve_limit: int
    max_work: int


@dataclass(frozen=True)
class ExperimentContext:
    """Domain objects resolved from a validated configuration."""

    config: ExperimentConfig
    model: NilsystemModel
    sequence: PolySequence
    start: GroupElement
    observable: Observable
    wdata: WData

    @property
    def generator(self) -> GroupElement:
        return self.sequence.generators[0]

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "ExperimentContext":
        kind = ModelKind(config.model)
        generators = tuple(build_element(kind, g) for g in config.generators)
        dim = generators[0].dimension
        model = NilsystemModel.heisenberg() if kind is ModelKind.HEISENBERG else NilsystemModel.torus(dim)
        start = build_element(kind, config.start or [])
        for element in (*generators, start):
            model.check(element)
        if kind is ModelKind.HEISENBERG:
            start = reduce(start)
        exponents = tuple(tuple(p) for p in (config.exponents or []))
        return cls(
            config=config,
            model=model,
            sequence=PolySequence(generators, exponents),
            start=start,
            observable=build_observable(config.observable),
            wdata=make_w(config.omega, sieve(max(config.omega, 2))),
        )


@dataclass(frozen=True)
class ExperimentOutcome:
    series: AverageSeries
    details: dict[str, Any] = field(default_factory=dict)


def required_sieve_limit(ctx: ExperimentContext) -> int:
    """Largest integer the prime table must cover (0 when no table is needed)."""
    experiment = ctx.config.experiment
    N = ctx.config.n_max
    if experiment is ExperimentKind.CONVERGE_PRIME:
        return N
    if experiment in (
        ExperimentKind.ANTICORR,
        ExperimentKind.WTRICK_CHECK,
        ExperimentKind.DECOMPOSITION,
    ):
        return ctx.wdata.W * (N + 1)
    return 0


def predicted_work(ctx: ExperimentContext) -> int:
    """Rough count of term evaluations, weighted by observable cost."""
    config = ctx.config
    N = config.n_max
    cost = observable_cost(ctx.observable)
    W, phi = ctx.wdata.W, ctx.wdata.phi_W
    experiment = config.experiment
    if experiment is ExperimentKind.CONVERGE_PRIME:
        return N + 2 * N * cost
    if experiment is ExperimentKind.CONVERGE_BIRKHOFF:
        return N * cost
    if experiment is ExperimentKind.ANTICORR:
        return W * N + phi * N * cost + N * cost
    if experiment is ExperimentKind.WTRICK_CHECK:
        return W * N * (3 + cost)
    if experiment is ExperimentKind.DECOMPOSITION:
        return W * N * (1 + cost) + 2 * phi * N * cost
    n_vectors = sum(len(level_vectors(ctx.model.dimension, j)) for j in range(1, config.k_max + 1))
    return config.starting_points * N * cost + config.m_max * n_vectors * N


def series_rows(series: AverageSeries) -> list[SeriesRow]:
    deltas = (None, *series.cauchy_deltas)
    return [
        SeriesRow(N=N, value=value, delta=delta)
        for N, value, delta in zip(series.checkpoints, series.values, deltas)
    ]


@dataclass
class RunExperimentUseCase:
    """Run one experiment description and persist its series and summary."""

    averaging_service: AveragingService
    repository: IResultRepository
    limits: ResourceLimits

    def check_resources(self, ctx: ExperimentContext) -> None:
        limit = required_sieve_limit(ctx)
        if limit and ctx.wdata.W > MAX_ENUMERATED_W:
            raise ResourceGuardError(
                f"W={ctx.wdata.W} has too many coprime residues to enumerate"
            )
        if limit > self.limits.max_sieve_limit:
            logger.warning("Sieve limit %d exceeds guard %d", limit, self.limits.max_sieve_limit)
            raise ResourceGuardError(
                f"Experiment needs primes up to {limit}, guard is {self.limits.max_sieve_limit}"
            )
        work = predicted_work(ctx)
        if work > self.limits.max_work:
            logger.warning("Predicted work %d exceeds guard %d", work, self.limits.max_work)
            raise ResourceGuardError(
                f"Predicted work {work} term evaluations exceeds the guard {self.limits.max_work}"
            )

    def _sieve(self, limit: int) -> PrimeTable:
        started = time.perf_counter()
        table = sieve(max(limit, 2))
        logger.info(
            "Sieved up to %d: pi=%d in %.3fs",
            table.limit, table.prime_count, time.perf_counter() - started,
        )
        return table

    def _space_mean(self, ctx: ExperimentContext) -> complex:
        grid = QUADRATURE_GRID if ctx.model.dimension <= 3 else SMALL_QUADRATURE_GRID
        return space_mean(ctx.observable, ctx.model, grid)

    def execute(self, config: ExperimentConfig) -> ExperimentSummary:
        started = time.perf_counter()
        try:
            ctx = ExperimentContext.from_config(config)
        except (ArgumentRangeError, ModelMismatchError, NegativeExponentError) as e:
            raise InvalidExperimentConfigError(f"Invalid experiment description: {e}") from e
        self.check_resources(ctx)
        logger.info(
            "Running %s on the %d-step %s model (degree %d) with %s up to N=%d",
            config.experiment.value, ctx.model.step, config.model, ctx.sequence.degree,
            ctx.observable.describe(), config.n_max,
        )
        runners = {
            ExperimentKind.CONVERGE_PRIME: self._converge_prime,
            ExperimentKind.CONVERGE_BIRKHOFF: self._converge_birkhoff,
            ExperimentKind.ANTICORR: self._anticorr,
            ExperimentKind.WTRICK_CHECK: self._wtrick_check,
            ExperimentKind.ERGODICITY: self._ergodicity,
            ExperimentKind.DECOMPOSITION: self._decomposition,
        }
        outcome = runners[config.experiment](ctx)
        self.repository.save_series(series_rows(outcome.series))

        wall = time.perf_counter() - started
        summary = ExperimentSummary(
            experiment=config.experiment,
            config=config.model_dump(mode="json"),
            final_value=ComplexValue.of(outcome.series.final_value),
            max_tail_delta=outcome.series.max_tail_delta(3),
            n_max=outcome.series.checkpoints[-1],
            wall_seconds=wall,
            details=outcome.details,
            generated_at=datetime.now(timezone.utc),
        )
        self.repository.save_summary(summary)
        logger.info("Finished %s in %.2fs", config.experiment.value, wall)
        return summary

    # -- experiments -----------------------------------------------------

    def _converge_prime(self, ctx: ExperimentContext) -> ExperimentOutcome:
        config = ctx.config
        table = self._sieve(required_sieve_limit(ctx))
        service = self.averaging_service
        F, seq, x = ctx.observable, ctx.sequence, ctx.start
        series = service.dyadic_series(service.prime_kernel(F, seq, x, table), config.n0, config.doublings)
        N = config.n_max
        lam = service.lambda_avg(F, seq, x, N, table)
        birkhoff = service.birkhoff_avg(F, seq, x, N)
        mean = self._space_mean(ctx)
        return ExperimentOutcome(
            series,
            {
                "lambda_avg": _c(lam),
                "prime_lambda_gap": abs(series.final_value - lam),
                "birkhoff_avg": _c(birkhoff),
                "prime_birkhoff_gap": abs(series.final_value - birkhoff),
                "space_mean": _c(mean),
                "distance_to_space_mean": abs(series.final_value - mean),
                "linear": ctx.sequence.is_linear,
            },
        )

    def _converge_birkhoff(self, ctx: ExperimentContext) -> ExperimentOutcome:
        config = ctx.config
        service = self.averaging_service
        kernel = service.birkhoff_kernel(ctx.observable, ctx.sequence, ctx.start)
        series = service.dyadic_series(kernel, config.n0, config.doublings)
        mean = self._space_mean(ctx)
        return ExperimentOutcome(
            series,
            {
                "space_mean": _c(mean),
                "distance_to_space_mean": abs(series.final_value - mean),
                "linear": ctx.sequence.is_linear,
            },
        )

    def _omega_note(self, ctx: ExperimentContext) -> bool:
        admissible = omega_growth_admissible(ctx.config.omega, ctx.config.n_max)
        logger.info(
            "omega=%d %s the growth condition omega <= (1/2) log log N at N=%d",
            ctx.config.omega, "satisfies" if admissible else "does not satisfy", ctx.config.n_max,
        )
        return admissible

    def _anticorr(self, ctx: ExperimentContext) -> ExperimentOutcome:
        config = ctx.config
        table = self._sieve(required_sieve_limit(ctx))
        service = self.averaging_service
        F, g, x, wdata = ctx.observable, ctx.generator, ctx.start, ctx.wdata
        results = service.anticorr_series(F, g, x, wdata, config.checkpoints, table)
        series = AverageSeries.from_values(config.checkpoints, [complex(a.max_abs) for a in results])
        final = results[-1]
        raw = service.raw_correlation(F, g, x, config.n_max, table)
        return ExperimentOutcome(
            series,
            {
                "W": wdata.W,
                "phi_W": wdata.phi_W,
                "per_residue": {str(r): _c(v) for r, v in final.per_r},
                "max_abs": final.max_abs,
                "worst_residue": final.worst_residue,
                "raw_correlation": _c(raw),
                "raw_correlation_abs": abs(raw),
                "omega_growth_admissible": self._omega_note(ctx),
            },
        )

    def _wtrick_check(self, ctx: ExperimentContext) -> ExperimentOutcome:
        config = ctx.config
        table = self._sieve(required_sieve_limit(ctx))
        service = self.averaging_service
        F, g, x, wdata = ctx.observable, ctx.generator, ctx.start, ctx.wdata
        series = service.dyadic_series(
            service.wtrick_kernel(F, g, x, wdata, table), config.n0, config.doublings
        )
        N = config.n_max
        WN = wdata.W * N
        b = lambda_observable_sequence(F, g, x, table)
        split = service.wtrick_exact_split(b, wdata.W, N)
        coprime = service.wtrick_coprime_form(b, wdata, N)
        bound = (
            (wdata.omega + 2 * wdata.phi_W) * ctx.observable.sup_bound * math.log(WN + wdata.W) / WN
        )
        return ExperimentOutcome(
            series,
            {
                "W": wdata.W,
                "phi_W": wdata.phi_W,
                "lhs": _c(split.lhs),
                "rhs": _c(split.rhs_full),
                "relative_gap": split.relative_gap,
                "main": _c(coprime.main),
                "residual": _c(coprime.residual),
                "small_prime_terms": _c(coprime.small_prime_terms),
                "boundary_terms": _c(coprime.boundary_terms),
                "identity_error": coprime.identity_error,
                "residual_bound": bound,
                "omega_growth_admissible": self._omega_note(ctx),
            },
        )

    def _decomposition(self, ctx: ExperimentContext) -> ExperimentOutcome:
        config = ctx.config
        table = self._sieve(required_sieve_limit(ctx))
        service = self.averaging_service
        results = service.decomposition_series(
            ctx.observable, ctx.generator, ctx.start, ctx.wdata, config.checkpoints, table
        )
        series = AverageSeries.from_values(config.checkpoints, [d.lhs for d in results])
        final = results[-1]
        scale = max(abs(final.lhs), 1.0)
        return ExperimentOutcome(
            series,
            {
                "W": ctx.wdata.W,
                "phi_W": ctx.wdata.phi_W,
                "I_N": _c(final.I_N),
                "II_N": _c(final.II_N),
                "remainder": _c(final.remainder),
                "lhs": _c(final.lhs),
                "reconstruction_error": final.reconstruction_error,
                "relative_reconstruction_error": final.reconstruction_error / scale,
                "omega_growth_admissible": self._omega_note(ctx),
            },
        )

    def _ergodicity(self, ctx: ExperimentContext) -> ExperimentOutcome:
        config = ctx.config
        service = self.averaging_service
        rotation = kronecker_rotation(ctx.generator)
        weyl = service.weyl_totality_test(rotation, config.m_max, config.k_max, config.n_max)
        rng = np.random.Generator(np.random.Philox(config.seed))
        points = [random_element(ctx.model, rng) for _ in range(config.starting_points)]
        series = service.unique_ergodicity_series(
            ctx.observable, ctx.sequence, points, config.checkpoints
        )
        return ExperimentOutcome(
            series,
            {
                "rotation": [f.to_float() for f in rotation],
                "horizontal_projection": ctx.model.kind is ModelKind.HEISENBERG,
                "weyl_matrix": weyl.tolist(),
                "weyl_max": float(weyl.max()),
                "starting_points": [list(p.as_floats()) for p in points],
                "spread": series.final_value.real,
            },
        )

