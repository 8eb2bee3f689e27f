"""
Command handlers - one function per ``nilprime`` subcommand.

Each handler returns the process exit status: 0 on success, 2 for an invalid
experiment description, 3 when a resource guard refuses the run.
"""

import argparse
import logging
import sys
from pathlib import Path

from src.application.use_cases.run_experiment import load_experiment_config
from src.domain.exceptions.domain_exceptions import DomainError, ResourceGuardError
from src.presentation.cli.dependencies import (
    get_app_settings,
    get_block_executor,
    get_list_observables_use_case,
    get_run_experiment_use_case,
    get_sieve_stats_use_case,
    resolve_output_dir,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RESOURCE_GUARD = 3


def _fail(message: str, status: int) -> int:
    print(f"nilprime: error: {message}", file=sys.stderr)
    return status


def run_command(args: argparse.Namespace) -> int:
    """Run an experiment description and write series.csv and summary.json."""
    settings = get_app_settings()
    try:
        config = load_experiment_config(Path(args.config))
    except DomainError as e:
        return _fail(str(e), EXIT_INVALID)

    output_dir = resolve_output_dir(settings, args.out, config.output)
    try:
        executor = get_block_executor(settings, args.threads)
    except DomainError as e:
        return _fail(str(e), EXIT_INVALID)
    try:
        use_case = get_run_experiment_use_case(settings, executor, output_dir)
        summary = use_case.execute(config)
    except ResourceGuardError as e:
        return _fail(str(e), EXIT_RESOURCE_GUARD)
    except DomainError as e:
        return _fail(str(e), EXIT_INVALID)
    finally:
        executor.close()

    print(
        f"{summary.experiment.value}: N={summary.n_max} "
        f"value={complex(summary.final_value.re, summary.final_value.im):.12g} "
        f"max_tail_delta={summary.max_tail_delta:.3g} -> {output_dir}"
    )
    return EXIT_OK


def sieve_stats_command(args: argparse.Namespace) -> int:
    """Print pi(N), theta(N)/N and W, phi(W) for small omega."""
    settings = get_app_settings()
    use_case = get_sieve_stats_use_case(settings)
    try:
        stats = use_case.execute(args.n)
    except ResourceGuardError as e:
        return _fail(str(e), EXIT_RESOURCE_GUARD)
    except DomainError as e:
        return _fail(str(e), EXIT_INVALID)

    print(f"N           {stats.limit}")
    print(f"pi(N)       {stats.prime_count}")
    print(f"theta(N)/N  {stats.theta_ratio:.12f}")
    print(f"sieve time  {stats.sieve_seconds:.3f}s")
    print(f"self-check  {'ok' if stats.trial_division_check else 'FAILED'}")
    for row in stats.w_table:
        print(f"omega={row['omega']:<3} W={row['W']:<6} phi(W)={row['phi_W']}")
    return EXIT_OK if stats.trial_division_check else 1


def list_observables_command(args: argparse.Namespace) -> int:
    """Print the built-in observables with Lipschitz bounds and means."""
    for info in get_list_observables_use_case().execute():
        mean = complex(info.analytic_mean.re, info.analytic_mean.im)
        print(
            f"{info.kind:<16} model={info.model:<10} e.g. {info.example:<22} "
            f"M={info.lipschitz_bound:.6g} sup={info.sup_bound:.8g} mean={mean:g}"
        )
    return EXIT_OK
