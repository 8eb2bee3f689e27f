from dataclasses import dataclass
from typing import Sequence

from ..exceptions.domain_exceptions import ArgumentRangeError, ModelMismatchError
from ..value_objects.group_element import GroupElement, ModelKind

MAX_DEGREE = 4


def _trim(coefficients: Sequence[int]) -> tuple[int, ...]:
    trimmed = list(coefficients)
    while len(trimmed) > 1 and trimmed[-1] == 0:
        trimmed.pop()
    return tuple(int(c) for c in trimmed)


@dataclass(frozen=True)
class PolySequence:
    """g(n) = g_1^{p_1(n)} ... g_m^{p_m(n)} with integer polynomials p_i.

    Each exponent polynomial is a coefficient vector, constant term first.
    """

    generators: tuple[GroupElement, ...]
    exponents: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise ArgumentRangeError("A polynomial sequence needs at least one generator")
        if len(self.generators) != len(self.exponents):
            raise ArgumentRangeError(
                f"{len(self.generators)} generators but {len(self.exponents)} exponent polynomials"
            )
        first = self.generators[0]
        for g in self.generators[1:]:
            if g.kind is not first.kind or g.dimension != first.dimension:
                raise ModelMismatchError("All generators must share one model")
        trimmed = tuple(_trim(p) for p in self.exponents)
        for p in trimmed:
            if not p:
                raise ArgumentRangeError("Exponent polynomials cannot be empty")
            if len(p) - 1 > MAX_DEGREE:
                raise ArgumentRangeError(
                    f"Polynomial degree {len(p) - 1} exceeds the cap of {MAX_DEGREE}"
                )
        object.__setattr__(self, "exponents", trimmed)

    @classmethod
    def linear(cls, g: GroupElement) -> "PolySequence":
        """The sequence g(n) = g^n."""
        return cls(generators=(g,), exponents=((0, 1),))

    @property
    def kind(self) -> ModelKind:
        return self.generators[0].kind

    @property
    def dimension(self) -> int:
        return self.generators[0].dimension

    @property
    def degree(self) -> int:
        return max(len(p) - 1 for p in self.exponents)

    @property
    def is_linear(self) -> bool:
        return len(self.generators) == 1 and self.exponents[0] == (0, 1)

    def exponent_values(self, n: int) -> tuple[int, ...]:
        """Exact big-integer values p_i(n) by Horner's rule."""
        values = []
        for p in self.exponents:
            acc = 0
            for c in reversed(p):
                acc = acc * n + c
            values.append(acc)
        return tuple(values)
