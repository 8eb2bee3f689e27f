from dataclasses import dataclass
from fractions import Fraction

from ..exceptions.domain_exceptions import ArgumentRangeError

FRAC_BITS = 128
ONE = 1 << FRAC_BITS
MASK = ONE - 1


def fixed_from_ratio(numerator: int, denominator: int) -> int:
    """Signed fixed-point numerator of numerator/denominator, rounded to nearest."""
    if denominator <= 0:
        raise ArgumentRangeError(f"Denominator must be positive, got {denominator}")
    return (2 * numerator * ONE + denominator) // (2 * denominator)


def fixed_from_number(value: int | float | Fraction | str) -> int:
    """Signed fixed-point numerator of an exact rational (floats are taken exactly)."""
    ratio = Fraction(value)
    return fixed_from_ratio(ratio.numerator, ratio.denominator)


def fixed_to_float(value: int) -> float:
    return value / ONE


@dataclass(frozen=True)
class UnitFrac:
    """A point of [0, 1) stored as value / 2**128.

    Addition, subtraction and integer multiples wrap around modulo 1 and are
    exact. The product of two fractions truncates toward zero.
    """

    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < ONE:
            raise ArgumentRangeError(
                f"UnitFrac numerator must lie in [0, 2**128), got {self.value}"
            )

    @classmethod
    def zero(cls) -> "UnitFrac":
        return cls(0)

    @classmethod
    def from_ratio(cls, numerator: int, denominator: int) -> "UnitFrac":
        """Round numerator/denominator (mod 1) to the nearest representable point."""
        return cls(fixed_from_ratio(numerator, denominator) & MASK)

    @classmethod
    def from_number(cls, value: int | float | Fraction | str) -> "UnitFrac":
        return cls(fixed_from_number(value) & MASK)

    def __add__(self, other: "UnitFrac") -> "UnitFrac":
        return UnitFrac((self.value + other.value) & MASK)

    def __sub__(self, other: "UnitFrac") -> "UnitFrac":
        return UnitFrac((self.value - other.value) & MASK)

    def __mul__(self, other: "UnitFrac") -> "UnitFrac":
        return UnitFrac((self.value * other.value) >> FRAC_BITS)

    def times(self, k: int) -> "UnitFrac":
        """k * self mod 1, exact for any integer k."""
        return UnitFrac((k * self.value) & MASK)

    @property
    def hi64(self) -> int:
        return self.value >> 64

    def to_float(self) -> float:
        return self.value / ONE

    def __float__(self) -> float:
        return self.to_float()

    def __str__(self) -> str:
        return repr(self.to_float())
