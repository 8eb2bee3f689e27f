import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from ..exceptions.domain_exceptions import ArgumentRangeError
from ..value_objects.group_element import ModelKind

DEFAULT_THETA_TRUNCATION = 8


class ObservableKind(str, Enum):
    CONSTANT = "constant"
    TORUS_CHARACTER = "torus-character"
    HEIS_HORIZONTAL = "heis-horizontal"
    HEIS_THETA = "heis-theta"


def theta_sup_bound(truncation: int) -> float:
    return math.fsum(math.exp(-math.pi * m * m) for m in range(-truncation, truncation + 1))


def theta_truncation_defect(truncation: int) -> float:
    return 2.0 * math.exp(-math.pi * (truncation - 1) ** 2)


@dataclass(frozen=True)
class Observable:
    """A Gamma-invariant test function F with declared Lipschitz and sup bounds.

    ``analytic_mean`` is None when the space mean is only available by
    quadrature.
    """

    kind: ObservableKind
    lipschitz_bound: float
    sup_bound: float
    analytic_mean: Optional[complex]
    frequencies: tuple[int, ...] = ()
    truncation: int = DEFAULT_THETA_TRUNCATION
    value: complex = 1.0

    @classmethod
    def constant(cls, value: complex = 1.0) -> "Observable":
        return cls(
            kind=ObservableKind.CONSTANT,
            lipschitz_bound=0.0,
            sup_bound=abs(value),
            analytic_mean=value,
            value=value,
        )

    @classmethod
    def torus_character(cls, k: Sequence[int]) -> "Observable":
        k = tuple(int(v) for v in k)
        if not k:
            raise ArgumentRangeError("A torus character needs a frequency vector")
        trivial = all(v == 0 for v in k)
        return cls(
            kind=ObservableKind.TORUS_CHARACTER,
            lipschitz_bound=2 * math.pi * sum(abs(v) for v in k),
            sup_bound=1.0,
            analytic_mean=1.0 if trivial else 0.0,
            frequencies=k,
        )

    @classmethod
    def heis_horizontal(cls, kx: int, ky: int) -> "Observable":
        trivial = kx == 0 and ky == 0
        return cls(
            kind=ObservableKind.HEIS_HORIZONTAL,
            lipschitz_bound=2 * math.pi * (abs(kx) + abs(ky)),
            sup_bound=1.0,
            analytic_mean=1.0 if trivial else 0.0,
            frequencies=(int(kx), int(ky)),
        )

    @classmethod
    def heis_theta(cls, truncation: int = DEFAULT_THETA_TRUNCATION) -> "Observable":
        """F(x,y,z) = sum_{|m|<=K} exp(-pi (y+m)^2) exp(2 pi i (z + m x)), width 1."""
        if truncation < 3:
            raise ArgumentRangeError(f"Theta truncation K must be >= 3, got {truncation}")
        K = truncation
        lipschitz = (
            2 * math.pi * (K + 1)
            + 2 * math.pi * K
            + 2 * math.pi * math.sqrt(2 / math.e) * K
        )
        return cls(
            kind=ObservableKind.HEIS_THETA,
            lipschitz_bound=lipschitz,
            sup_bound=theta_sup_bound(K),
            analytic_mean=0.0,
            truncation=K,
        )

    @property
    def model_kind(self) -> Optional[ModelKind]:
        """The model this observable lives on; None when it fits any model."""
        if self.kind is ObservableKind.CONSTANT:
            return None
        if self.kind is ObservableKind.TORUS_CHARACTER:
            return ModelKind.TORUS
        return ModelKind.HEISENBERG

    @property
    def invariance_defect(self) -> float:
        """Bound on |F(g gamma) - F(g)| caused by truncation."""
        if self.kind is ObservableKind.HEIS_THETA:
            return theta_truncation_defect(self.truncation)
        return 0.0

    @property
    def is_constant(self) -> bool:
        return self.kind is ObservableKind.CONSTANT

    def describe(self) -> str:
        if self.kind is ObservableKind.CONSTANT:
            return f"constant({self.value})"
        if self.kind is ObservableKind.HEIS_THETA:
            return f"heis-theta(K={self.truncation})"
        return f"{self.kind.value}{list(self.frequencies)}"
