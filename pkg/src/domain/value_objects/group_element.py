from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from ..exceptions.domain_exceptions import ArgumentRangeError, ModelMismatchError
from .unit_frac import ONE, UnitFrac, fixed_to_float


class ModelKind(str, Enum):
    TORUS = "torus"
    HEISENBERG = "heisenberg"


@dataclass(frozen=True)
class GroupElement:
    """An element of the model group G in fixed-point Mal'cev coordinates.

    Every coordinate is a signed integer numerator over 2**128. Torus
    coordinates always lie in [0, 1). Heisenberg coordinates may carry an
    integer part until the element is reduced modulo the integer lattice.
    """

    kind: ModelKind
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coords:
            raise ArgumentRangeError("A group element needs at least one coordinate")
        if self.kind is ModelKind.HEISENBERG and len(self.coords) != 3:
            raise ArgumentRangeError(
                f"Heisenberg elements have 3 coordinates, got {len(self.coords)}"
            )
        if self.kind is ModelKind.TORUS and any(
            not 0 <= c < ONE for c in self.coords
        ):
            raise ArgumentRangeError("Torus coordinates must lie in [0, 1)")

    @classmethod
    def torus(cls, fracs: Sequence[UnitFrac]) -> "GroupElement":
        return cls(ModelKind.TORUS, tuple(f.value for f in fracs))

    @classmethod
    def heisenberg(cls, x: int, y: int, z: int) -> "GroupElement":
        """Build from raw fixed-point numerators."""
        return cls(ModelKind.HEISENBERG, (x, y, z))

    @classmethod
    def identity(cls, kind: ModelKind, dimension: int) -> "GroupElement":
        return cls(kind, (0,) * dimension)

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def is_reduced(self) -> bool:
        return all(0 <= c < ONE for c in self.coords)

    def unit_fracs(self) -> tuple[UnitFrac, ...]:
        return tuple(UnitFrac(c) for c in self.coords)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(fixed_to_float(c) for c in self.coords)

    def require(self, kind: ModelKind) -> None:
        if self.kind is not kind:
            raise ModelMismatchError(
                f"Expected a {kind.value} element, got {self.kind.value}"
            )
