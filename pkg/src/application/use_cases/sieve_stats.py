import logging
import time
from dataclasses import dataclass

from src.application.dtos.experiment_dtos import SieveStats
from src.domain.exceptions.domain_exceptions import ResourceGuardError
from src.domain.services.primes import chebyshev_theta, make_w, pi, sieve, trial_division_is_prime

logger = logging.getLogger(__name__)

REPORTED_OMEGAS = (2, 3, 5, 7)
SELF_CHECK_LIMIT = 10**4


@dataclass
class SieveStatsUseCase:
    """Sieve up to N and report pi(N), theta(N)/N and small W-trick moduli."""

    max_sieve_limit: int

    def execute(self, limit: int) -> SieveStats:
        if limit > self.max_sieve_limit:
            logger.warning("Sieve limit %d exceeds guard %d", limit, self.max_sieve_limit)
            raise ResourceGuardError(
                f"Sieve limit {limit} exceeds the guard {self.max_sieve_limit}"
            )
        started = time.perf_counter()
        table = sieve(limit)
        elapsed = time.perf_counter() - started
        logger.info("Sieved up to %d in %.3fs", limit, elapsed)

        w_table = []
        small = sieve(max(REPORTED_OMEGAS))
        for omega in REPORTED_OMEGAS:
            wdata = make_w(omega, small)
            w_table.append({"omega": omega, "W": wdata.W, "phi_W": wdata.phi_W})

        checked = min(limit, SELF_CHECK_LIMIT)
        agrees = all(
            bool(table.is_prime[n]) == trial_division_is_prime(n) for n in range(checked + 1)
        )
        if not agrees:
            logger.error("Sieve disagrees with trial division below %d", checked)

        return SieveStats(
            limit=limit,
            prime_count=pi(table, limit),
            theta_ratio=chebyshev_theta(table, limit) / limit,
            sieve_seconds=elapsed,
            w_table=w_table,
            trial_division_check=agrees,
        )
