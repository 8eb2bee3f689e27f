from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod

import numpy as np

from ..exceptions.domain_exceptions import (
    ArgumentRangeError,
    NonCoprimeResidueError,
    ResourceGuardError,
)

# Residue lists are materialized on demand; beyond this W they do not fit memory.
MAX_ENUMERATED_W = 10**7


@dataclass(frozen=True)
class WData:
    """The primorial W = W_omega, its totient and its reduced residues."""

    omega: int
    small_primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.omega < 2:
            raise ArgumentRangeError(f"omega must be at least 2, got {self.omega}")
        if not self.small_primes or any(p > self.omega for p in self.small_primes):
            raise ArgumentRangeError(
                f"W needs the primes up to omega={self.omega}, got {self.small_primes}"
            )

    @property
    def W(self) -> int:
        return prod(self.small_primes)

    @property
    def phi_W(self) -> int:
        return prod(p - 1 for p in self.small_primes)

    @property
    def density(self) -> float:
        """phi(W) / W, the renormalizing factor of the W-trick."""
        return self.phi_W / self.W

    @cached_property
    def coprime_residues(self) -> tuple[int, ...]:
        """Ascending r in [1, W) with gcd(r, W) = 1."""
        W = self.W
        if W > MAX_ENUMERATED_W:
            raise ResourceGuardError(
                f"Refusing to enumerate {self.phi_W} residues modulo W={W}"
            )
        mask = np.ones(W, dtype=bool)
        for p in self.small_primes:
            mask[::p] = False
        residues = tuple(np.flatnonzero(mask).tolist())
        if len(residues) != self.phi_W:
            raise ArgumentRangeError(f"Residue count mismatch modulo {W}")
        return residues

    def require_residue(self, r: int) -> None:
        if r <= 0 or r >= self.W or gcd(r, self.W) != 1:
            raise NonCoprimeResidueError(f"Residue {r} is not coprime to W={self.W}")
