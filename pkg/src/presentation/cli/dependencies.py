"""
Dependency wiring for the command-line interface.

Concrete executors and repositories are chosen here; the use cases only see
the application interfaces.
"""

import logging
from pathlib import Path
from typing import Optional

from src.application.interfaces.i_block_executor import IBlockExecutor
from src.application.interfaces.i_result_repository import IResultRepository
from src.application.services.averaging_service import AveragingService
from src.application.use_cases.list_observables import ListObservablesUseCase
from src.application.use_cases.run_experiment import ResourceLimits, RunExperimentUseCase
from src.application.use_cases.sieve_stats import SieveStatsUseCase
from src.infrastructure.config.settings import Settings, get_settings
from src.infrastructure.parallel.block_executors import create_block_executor
from src.infrastructure.repositories.file_result_repository import FileResultRepository

logger = logging.getLogger(__name__)


def get_app_settings() -> Settings:
    return get_settings()


def get_block_executor(settings: Settings, threads: Optional[int] = None) -> IBlockExecutor:
    workers = threads if threads is not None else settings.workers
    executor = create_block_executor(workers)
    logger.info("Using %s with %d worker(s)", type(executor).__name__, executor.workers)
    return executor


def resolve_output_dir(settings: Settings, cli_out: Optional[str], config_out: Optional[str]) -> Path:
    """--out wins over the description's ``output``, which wins over the settings."""
    if cli_out:
        return Path(cli_out)
    if config_out:
        return Path(config_out)
    return settings.output_dir


def get_result_repository(output_dir: Path) -> IResultRepository:
    return FileResultRepository(output_dir)


def get_run_experiment_use_case(
    settings: Settings, executor: IBlockExecutor, output_dir: Path
) -> RunExperimentUseCase:
    return RunExperimentUseCase(
        averaging_service=AveragingService(executor=executor),
        repository=get_result_repository(output_dir),
        limits=ResourceLimits(
            max_sieve_limit=settings.max_sieve_limit,
            max_work=settings.max_work,
        ),
    )


def get_sieve_stats_use_case(settings: Settings) -> SieveStatsUseCase:
    return SieveStatsUseCase(max_sieve_limit=settings.max_sieve_limit)


def get_list_observables_use_case() -> ListObservablesUseCase:
    return ListObservablesUseCase()
