from abc import ABC, abstractmethod
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
Item = TypeVar("Item")

Block = tuple[int, int]


class IBlockExecutor(ABC):
    """Interface for mapping a function over index blocks."""

    @property
    @abstractmethod
    def workers(self) -> int:
        """Number of workers the executor runs on."""
        pass

    @abstractmethod
    def map_ordered(self, fn: Callable[[Item], T], items: Sequence[Item]) -> list[T]:
        """Apply fn to every work item and return the results in item order."""
        pass

    def close(self) -> None:
        """Release worker resources."""
        pass
