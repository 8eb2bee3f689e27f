from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from src.application.dtos.experiment_dtos import ExperimentSummary


@dataclass(frozen=True)
class SeriesRow:
    """One CSV row: checkpoint N, the complex value and its Cauchy difference."""

    N: int
    value: complex
    delta: Optional[float]


class IResultRepository(ABC):
    """Interface for persisting experiment results."""

    @abstractmethod
    def save_series(self, rows: Sequence[SeriesRow]) -> Path:
        """Write the checkpoint series and return its path."""
        pass

    @abstractmethod
    def save_summary(self, summary: ExperimentSummary) -> Path:
        """Write the run summary and return its path."""
        pass
