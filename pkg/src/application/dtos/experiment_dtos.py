from datetime import datetime
from enum import Enum
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, StrictFloat, StrictInt, StrictStr, model_validator

from src.domain.services.nilsystem import IrrationalName

# A coordinate: a named irrational constant, an exact rational "p/q", or a number.
Coordinate = Union[StrictInt, StrictFloat, StrictStr]


class ExperimentKind(str, Enum):
    CONVERGE_PRIME = "converge-prime"
    CONVERGE_BIRKHOFF = "converge-birkhoff"
    ANTICORR = "anticorr"
    WTRICK_CHECK = "wtrick-check"
    ERGODICITY = "ergodicity"
    DECOMPOSITION = "decomposition"


LINEAR_ONLY = {
    ExperimentKind.ANTICORR,
    ExperimentKind.WTRICK_CHECK,
    ExperimentKind.ERGODICITY,
    ExperimentKind.DECOMPOSITION,
}


def _check_coordinate(value: Coordinate) -> None:
    if not isinstance(value, str):
        return
    if value in {name.value for name in IrrationalName}:
        return
    numerator, sep, denominator = value.partition("/")
    try:
        int(numerator)
        if sep and int(denominator) <= 0:
            raise ValueError
    except ValueError:
        raise ValueError(
            f"Coordinate {value!r} is neither a named constant "
            f"({', '.join(n.value for n in IrrationalName)}) nor a rational 'p/q'"
        ) from None


def _trimmed(coefficients: list[int]) -> list[int]:
    end = len(coefficients)
    while end > 1 and coefficients[end - 1] == 0:
        end -= 1
    return coefficients[:end]


class ObservableSpec(BaseModel):
    """Which built-in observable F to average."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["constant", "torus-character", "heis-horizontal", "heis-theta"] = "constant"
    k: list[StrictInt] = Field(default_factory=lambda: [1])
    truncation: int = Field(default=8, ge=3, le=64)
    value: float = 1.0


class ExperimentConfig(BaseModel):
    """A fully validated experiment description (unknown keys are rejected)."""

    model_config = ConfigDict(extra="forbid")

    experiment: ExperimentKind
    model: Literal["torus", "heisenberg"]
    generators: list[list[Coordinate]] = Field(min_length=1, max_length=5)
    exponents: Optional[list[list[StrictInt]]] = None
    start: Optional[list[Coordinate]] = None
    observable: ObservableSpec = Field(default_factory=ObservableSpec)
    n0: int = Field(default=1024, ge=2)
    doublings: int = Field(default=10, ge=0, le=40)
    omega: int = Field(default=3, ge=2, le=29)
    seed: int = Field(default=0, ge=0, lt=2**64)
    starting_points: int = Field(default=5, ge=2, le=1000)
    m_max: int = Field(default=5, ge=1, le=64)
    k_max: int = Field(default=3, ge=1, le=16)
    output: Optional[str] = None

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        dims = {len(g) for g in self.generators}
        if len(dims) != 1:
            raise ValueError("All generators must have the same number of coordinates")
        dim = dims.pop()
        if self.model == "heisenberg" and dim != 3:
            raise ValueError("Heisenberg generators have 3 coordinates")
        if self.model == "torus" and not 1 <= dim <= 4:
            raise ValueError("Torus generators have between 1 and 4 coordinates")
        for g in self.generators:
            for c in g:
                _check_coordinate(c)

        if self.exponents is None:
            self.exponents = [[0, 1] for _ in self.generators]
        if len(self.exponents) != len(self.generators):
            raise ValueError("One exponent polynomial is required per generator")
        if any(not p for p in self.exponents):
            raise ValueError("Exponent polynomials need at least one coefficient")

        if self.start is None:
            self.start = [0] * dim
        if len(self.start) != dim:
            raise ValueError(f"start must have {dim} coordinates")
        for c in self.start:
            _check_coordinate(c)

        obs = self.observable
        if obs.kind == "torus-character":
            if self.model != "torus":
                raise ValueError("torus-character needs the torus model")
            if len(obs.k) != dim:
                raise ValueError(f"torus-character needs {dim} frequencies")
        elif obs.kind.startswith("heis-") and self.model != "heisenberg":
            raise ValueError(f"{obs.kind} needs the heisenberg model")
        elif obs.kind == "heis-horizontal" and len(obs.k) != 2:
            raise ValueError("heis-horizontal needs 2 frequencies")

        if self.experiment in LINEAR_ONLY and (
            len(self.generators) != 1 or _trimmed(self.exponents[0]) != [0, 1]
        ):
            raise ValueError(f"{self.experiment.value} needs a single linear generator g^n")
        return self

    @property
    def n_max(self) -> int:
        return self.n0 << self.doublings

    @property
    def checkpoints(self) -> list[int]:
        return [self.n0 << j for j in range(self.doublings + 1)]


class ComplexValue(BaseModel):
    re: float
    im: float

    @classmethod
    def of(cls, value: complex) -> "ComplexValue":
        return cls(re=value.real, im=value.imag)


class ExperimentSummary(BaseModel):
    """Result summary written next to the CSV series."""

    experiment: ExperimentKind
    config: dict[str, Any]
    final_value: ComplexValue
    max_tail_delta: float
    n_max: int
    wall_seconds: float
    details: dict[str, Any] = Field(default_factory=dict)
    generated_at: datetime


class SieveStats(BaseModel):
    """Prime table statistics reported by ``nilprime sieve-stats``."""

    limit: int
    prime_count: int
    theta_ratio: float
    sieve_seconds: float
    w_table: list[dict[str, int]]
    trial_division_check: bool


class ObservableInfo(BaseModel):
    """One row of ``nilprime list-observables``."""

    kind: str
    model: str
    example: str
    lipschitz_bound: float
    sup_bound: float
    analytic_mean: ComplexValue
