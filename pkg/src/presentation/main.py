"""
Command-line entry point for nilprime.

    nilprime run <config.json> [--out DIR] [--threads K]
    nilprime sieve-stats <N>
    nilprime list-observables
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from src.infrastructure.config.settings import get_settings
from src.presentation.cli import list_observables_command, run_command, sieve_stats_command

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging() -> None:
    """Configure the root logger once, on stderr."""
    settings = get_settings()
    level = logging.DEBUG if settings.debug else settings.log_level.upper()
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilprime",
        description="Ergodic averages along primes on nilsystems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a JSON experiment description")
    run.add_argument("config", help="path to the experiment JSON")
    run.add_argument("--out", default=None, help="output directory (overrides the description)")
    run.add_argument("--threads", type=int, default=None, help="number of worker processes")
    run.set_defaults(handler=run_command)

    stats = sub.add_parser("sieve-stats", help="sieve up to N and print prime statistics")
    stats.add_argument("n", type=int, help="sieve limit N")
    stats.set_defaults(handler=sieve_stats_command)

    observables = sub.add_parser("list-observables", help="list the built-in observables")
    observables.set_defaults(handler=list_observables_command)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging()
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
