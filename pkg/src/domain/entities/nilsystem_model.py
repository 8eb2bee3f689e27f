from dataclasses import dataclass

from ..exceptions.domain_exceptions import ArgumentRangeError, ModelMismatchError
from ..value_objects.group_element import GroupElement, ModelKind


@dataclass(frozen=True)
class NilsystemModel:
    """The torus T^d (1-step) or the Heisenberg nilmanifold (2-step)."""

    kind: ModelKind
    dimension: int

    def __post_init__(self) -> None:
        if self.kind is ModelKind.HEISENBERG and self.dimension != 3:
            raise ArgumentRangeError("The Heisenberg model has dimension 3")
        if self.dimension < 1:
            raise ArgumentRangeError(f"Dimension must be positive, got {self.dimension}")

    @classmethod
    def torus(cls, dimension: int) -> "NilsystemModel":
        return cls(ModelKind.TORUS, dimension)

    @classmethod
    def heisenberg(cls) -> "NilsystemModel":
        return cls(ModelKind.HEISENBERG, 3)

    @property
    def step(self) -> int:
        return 1 if self.kind is ModelKind.TORUS else 2

    def check(self, element: GroupElement) -> None:
        if element.kind is not self.kind or element.dimension != self.dimension:
            raise ModelMismatchError(
                f"{element.kind.value}^{element.dimension} element used with "
                f"{self.kind.value}^{self.dimension} model"
            )
