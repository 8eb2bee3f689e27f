"""Prime sieving, the restricted von Mangoldt function and W-trick arithmetic."""

import math
from math import isqrt

import numpy as np

from ..entities.prime_table import PrimeTable
from ..exceptions.domain_exceptions import ArgumentRangeError
from ..value_objects.w_data import WData

MAX_SIEVE_LIMIT = 10**8
MAX_OMEGA = 29


def sieve(n_max: int) -> PrimeTable:
    """Eratosthenes over a single flat flag array covering [0, n_max]."""
    if not 2 <= n_max <= MAX_SIEVE_LIMIT:
        raise ArgumentRangeError(
            f"Sieve limit must lie in [2, {MAX_SIEVE_LIMIT}], got {n_max}"
        )
    is_prime = np.ones(n_max + 1, dtype=bool)
    is_prime[:2] = False
    is_prime[4::2] = False
    for p in range(3, isqrt(n_max) + 1, 2):
        if is_prime[p]:
            is_prime[p * p :: 2 * p] = False
    primes = np.flatnonzero(is_prime).astype(np.int64)
    return PrimeTable(limit=n_max, is_prime=is_prime, primes=primes)


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def lambda_prime(table: PrimeTable, n: int) -> float:
    """log n at primes, 0 elsewhere (prime powers carry no weight)."""
    table.require(n, lower=1)
    return math.log(n) if table.is_prime[n] else 0.0


def lambda_prime_array(table: PrimeTable, indices: np.ndarray) -> np.ndarray:
    """Vectorized lambda_prime for an integer index array inside the table."""
    weights = np.zeros(indices.shape, dtype=np.float64)
    if indices.size == 0:
        return weights
    if int(indices.min()) < 1 or int(indices.max()) > table.limit:
        raise ArgumentRangeError(f"Indices outside the sieved range [1, {table.limit}]")
    mask = table.is_prime[indices]
    weights[mask] = np.log(indices[mask].astype(np.float64))
    return weights


def pi(table: PrimeTable, n: int) -> int:
    return table.pi(n)


def chebyshev_theta(table: PrimeTable, n: int) -> float:
    """theta(n) = sum of log p over primes p <= n."""
    table.require(n)
    return math.fsum(np.log(table.primes_in(0, n).astype(np.float64)).tolist())


def make_w(omega: int, table: PrimeTable) -> WData:
    if not 2 <= omega <= MAX_OMEGA:
        raise ArgumentRangeError(f"omega must lie in [2, {MAX_OMEGA}], got {omega}")
    table.require(omega)
    return WData(omega=omega, small_primes=tuple(table.primes_in(0, omega).tolist()))


def lambda_w(wdata: WData, r: int, n: int, table: PrimeTable) -> float:
    """Lambda'_{r,omega}(n) = (phi(W)/W) * Lambda'(W n + r)."""
    wdata.require_residue(r)
    m = wdata.W * n + r
    if n < 0 or m > table.limit:
        raise ArgumentRangeError(
            f"W*n + r = {m} outside the sieved range [1, {table.limit}]"
        )
    return wdata.density * lambda_prime(table, m)


def lambda_w_array(wdata: WData, r: int, ns: np.ndarray, table: PrimeTable) -> np.ndarray:
    wdata.require_residue(r)
    return wdata.density * lambda_prime_array(table, wdata.W * ns + r)


def omega_growth_admissible(omega: int, n: int) -> bool:
    """Whether omega <= (1/2) log log N. Reported only, never enforced."""
    if n <= math.e:
        return False
    return omega <= 0.5 * math.log(math.log(n))
