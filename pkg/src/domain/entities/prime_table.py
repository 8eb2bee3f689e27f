from dataclasses import dataclass

import numpy as np

from ..exceptions.domain_exceptions import ArgumentRangeError


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Sieve output over [0, limit]: primality flags and the sorted prime list.

    There is no stored pi prefix array: pi(n) is a binary search of ``primes``.

    The arrays are frozen (non-writeable) so a table can be shared freely
    between readers and worker processes.
    """

    limit: int
    is_prime: np.ndarray
    primes: np.ndarray

    def __post_init__(self) -> None:
        if self.is_prime.shape != (self.limit + 1,):
            raise ArgumentRangeError(
                f"Primality flags must cover [0, {self.limit}], got shape {self.is_prime.shape}"
            )
        self.is_prime.flags.writeable = False
        self.primes.flags.writeable = False

    @property
    def prime_count(self) -> int:
        return int(self.primes.size)

    def require(self, n: int, lower: int = 0) -> None:
        if not lower <= n <= self.limit:
            raise ArgumentRangeError(
                f"n={n} outside the sieved range [{lower}, {self.limit}]"
            )

    def pi(self, n: int) -> int:
        self.require(n)
        return int(np.searchsorted(self.primes, n, side="right"))

    def contains(self, n: int) -> bool:
        self.require(n)
        return bool(self.is_prime[n])

    def primes_in(self, lo: int, hi: int) -> np.ndarray:
        """Primes p with lo < p <= hi."""
        self.require(hi)
        start = int(np.searchsorted(self.primes, lo, side="right"))
        stop = int(np.searchsorted(self.primes, hi, side="right"))
        return self.primes[start:stop]
