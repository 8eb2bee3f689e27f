from .commands import list_observables_command, run_command, sieve_stats_command

__all__ = ["list_observables_command", "run_command", "sieve_stats_command"]
