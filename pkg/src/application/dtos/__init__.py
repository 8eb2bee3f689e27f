from .experiment_dtos import (
    ComplexValue,
    ExperimentConfig,
    ExperimentKind,
    ExperimentSummary,
    ObservableInfo,
    ObservableSpec,
    SieveStats,
)

__all__ = [
    "ComplexValue",
    "ExperimentConfig",
    "ExperimentKind",
    "ExperimentSummary",
    "ObservableInfo",
    "ObservableSpec",
    "SieveStats",
]
