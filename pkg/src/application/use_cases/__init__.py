from .list_observables import ListObservablesUseCase
from .run_experiment import (
    ExperimentContext,
    ResourceLimits,
    RunExperimentUseCase,
    load_experiment_config,
    parse_experiment_config,
)
from .sieve_stats import SieveStatsUseCase

__all__ = [
    "ExperimentContext",
    "ListObservablesUseCase",
    "ResourceLimits",
    "RunExperimentUseCase",
    "SieveStatsUseCase",
    "load_experiment_config",
    "parse_experiment_config",
]
