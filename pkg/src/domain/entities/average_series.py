from dataclasses import dataclass
from typing import Sequence

from ..exceptions.domain_exceptions import ArgumentRangeError


@dataclass(frozen=True)
class AverageSeries:
    """Partial averages on a dyadic grid with their Cauchy differences."""

    checkpoints: tuple[int, ...]
    values: tuple[complex, ...]
    cauchy_deltas: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.checkpoints) != len(self.values):
            raise ArgumentRangeError("One value is required per checkpoint")
        if len(self.cauchy_deltas) != max(len(self.values) - 1, 0):
            raise ArgumentRangeError("cauchy_deltas must have one entry fewer than values")
        if any(a >= b for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            raise ArgumentRangeError("Checkpoints must be strictly ascending")

    @classmethod
    def from_values(
        cls, checkpoints: Sequence[int], values: Sequence[complex]
    ) -> "AverageSeries":
        deltas = tuple(abs(b - a) for a, b in zip(values, values[1:]))
        return cls(tuple(checkpoints), tuple(values), deltas)

    @property
    def final_value(self) -> complex:
        return self.values[-1]

    def max_tail_delta(self, tail: int = 3) -> float:
        """Largest of the last ``tail`` Cauchy differences (0 for a single point)."""
        if not self.cauchy_deltas:
            return 0.0
        return max(self.cauchy_deltas[-tail:])
