"""Block-sum kernels for every averaging object.

A kernel sums its terms over an index block (lo, hi] and knows how a
checkpoint N maps to an index bound and to a normalizer. Kernels are plain
frozen dataclasses so they pickle into worker processes.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, ClassVar

import numpy as np

from src.domain.entities.observable import Observable
from src.domain.entities.poly_sequence import PolySequence
from src.domain.entities.prime_table import PrimeTable
from src.domain.exceptions.domain_exceptions import ArgumentRangeError
from src.domain.services.nilsystem import linear_orbit_hi64, orbit_hi64
from src.domain.services.observables import character_phases, evaluate_batch
from src.domain.services.primes import lambda_prime_array
from src.domain.services.summation import exact_sum
from src.domain.value_objects.group_element import GroupElement
from src.domain.value_objects.w_data import WData

Block = tuple[int, int]


class AveragingKernel(ABC):
    """Sum of terms over (lo, hi] plus the checkpoint bookkeeping."""

    min_n: ClassVar[int] = 1

    def index_limit(self, N: int) -> int:
        """Largest term index included in the average at checkpoint N."""
        return N

    @abstractmethod
    def normalizer(self, N: int) -> float:
        pass

    @abstractmethod
    def block_sum(self, block: Block) -> complex:
        pass

    def max_index(self) -> int | None:
        """Largest index the kernel can address, None if unbounded."""
        return None

    def validate(self, N: int) -> None:
        if N < self.min_n:
            raise ArgumentRangeError(f"N must be at least {self.min_n}, got {N}")
        bound = self.max_index()
        if bound is not None and self.index_limit(N) > bound:
            raise ArgumentRangeError(
                f"N={N} needs indices up to {self.index_limit(N)}, table covers {bound}"
            )

    def __call__(self, block: Block) -> complex:
        return self.block_sum(block)



@dataclass(frozen=True)
class KernelBundle:
    """Several kernels behind one task; work items are (kernel index, block)."""

    kernels: tuple[AveragingKernel, ...]

    def __call__(self, item: tuple[int, Block]) -> complex:
        index, block = item
        return self.kernels[index].block_sum(block)


def _orbit_values(obs: Observable, seq: PolySequence, x: GroupElement, ns: np.ndarray) -> np.ndarray:
    if obs.is_constant:
        return np.full(ns.size, complex(obs.value), dtype=np.complex128)
    if seq.is_linear:
        coords = linear_orbit_hi64(seq.generators[0], x, ns.tolist())
    else:
        coords = orbit_hi64(seq, x, ns.tolist())
    return evaluate_batch(obs, coords, seq.kind)


@dataclass(frozen=True)
class PrimeAverageKernel(AveragingKernel):
    """(1/pi(N)) sum_{p<=N} F(g(p) x)."""

    observable: Observable
    sequence: PolySequence
    start: GroupElement
    table: PrimeTable
    min_n: ClassVar[int] = 2

    def normalizer(self, N: int) -> float:
        return float(self.table.pi(N))

    def max_index(self) -> int:
        return self.table.limit

    def block_sum(self, block: Block) -> complex:
        ps = self.table.primes_in(*block)
        return exact_sum(_orbit_values(self.observable, self.sequence, self.start, ps))


@dataclass(frozen=True)
class LambdaAverageKernel(AveragingKernel):
    """(1/N) sum_{n<=N} Lambda'(n) F(g(n) x); only primes carry weight."""

    observable: Observable
    sequence: PolySequence
    start: GroupElement
    table: PrimeTable
    min_n: ClassVar[int] = 2

    def normalizer(self, N: int) -> float:
        return float(N)

    def max_index(self) -> int:
        return self.table.limit

    def block_sum(self, block: Block) -> complex:
        ps = self.table.primes_in(*block)
        weights = np.log(ps.astype(np.float64))
        return exact_sum(weights * _orbit_values(self.observable, self.sequence, self.start, ps))


@dataclass(frozen=True)
class BirkhoffKernel(AveragingKernel):
    """(1/N) sum_{n=1}^N F(g(n) x)."""

    observable: Observable
    sequence: PolySequence
    start: GroupElement

    def normalizer(self, N: int) -> float:
        return float(N)

    def block_sum(self, block: Block) -> complex:
        ns = np.arange(block[0] + 1, block[1] + 1, dtype=np.int64)
        return exact_sum(_orbit_values(self.observable, self.sequence, self.start, ns))


@dataclass(frozen=True)
class RawCorrelationKernel(AveragingKernel):
    """(1/N) sum_{n<=N} (Lambda'(n) - 1) F(g^n x), no W-trick."""

    observable: Observable
    generator: GroupElement
    start: GroupElement
    table: PrimeTable

    def normalizer(self, N: int) -> float:
        return float(N)

    def max_index(self) -> int:
        return self.table.limit

    def block_sum(self, block: Block) -> complex:
        ns = np.arange(block[0] + 1, block[1] + 1, dtype=np.int64)
        weights = lambda_prime_array(self.table, ns) - 1.0
        seq = PolySequence.linear(self.generator)
        return exact_sum(weights * _orbit_values(self.observable, seq, self.start, ns))


@dataclass(frozen=True)
class WStridedKernel(AveragingKernel):
    """(1/WN) sum_{n<=WN} Lambda'(n) F(g^n x); checkpoint N covers WN indices."""

    observable: Observable
    generator: GroupElement
    start: GroupElement
    W: int
    table: PrimeTable

    def index_limit(self, N: int) -> int:
        return self.W * N

    def normalizer(self, N: int) -> float:
        return float(self.W * N)

    def max_index(self) -> int:
        return self.table.limit

    def block_sum(self, block: Block) -> complex:
        ps = self.table.primes_in(*block)
        weights = np.log(ps.astype(np.float64))
        seq = PolySequence.linear(self.generator)
        return exact_sum(weights * _orbit_values(self.observable, seq, self.start, ps))


class ResidueMode(str, Enum):
    CORRELATION = "correlation"
    ORBIT = "orbit"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class ResidueKernel(AveragingKernel):
    """(1/N) sum_{n=1}^N w(n) F(g^{Wn+r} x) along one residue class.

    The weight w(n) is Lambda'_{r,omega}(n) - 1 (correlation),
    1 (orbit) or Lambda'_{r,omega}(n) (weighted).
    """

    observable: Observable
    generator: GroupElement
    start: GroupElement
    wdata: WData
    residue: int
    table: PrimeTable
    mode: ResidueMode = ResidueMode.CORRELATION

    def normalizer(self, N: int) -> float:
        return float(N)

    def validate(self, N: int) -> None:
        super().validate(N)
        if self.wdata.W * N + self.residue > self.table.limit:
            raise ArgumentRangeError(
                f"W*N + r = {self.wdata.W * N + self.residue} exceeds the table limit {self.table.limit}"
            )

    def block_sum(self, block: Block) -> complex:
        ns = np.arange(block[0] + 1, block[1] + 1, dtype=np.int64)
        ks = self.wdata.W * ns + self.residue
        seq = PolySequence.linear(self.generator)
        values = _orbit_values(self.observable, seq, self.start, ks)
        if self.mode is ResidueMode.ORBIT:
            return exact_sum(values)
        weights = self.wdata.density * lambda_prime_array(self.table, ks)
        if self.mode is ResidueMode.CORRELATION:
            weights = weights - 1.0
        return exact_sum(weights * values)


@dataclass(frozen=True)
class IndexedSequence:
    """A vectorized sequence accessor b_n valid for 1 <= n <= limit."""

    fn: Callable[[np.ndarray], np.ndarray]
    limit: int

    def __call__(self, indices: np.ndarray) -> np.ndarray:
        if indices.size and (int(indices.min()) < 1 or int(indices.max()) > self.limit):
            raise ArgumentRangeError(
                f"Sequence accessed outside [1, {self.limit}]"
            )
        return np.asarray(self.fn(indices), dtype=np.complex128)


@dataclass(frozen=True)
class _LambdaObservableTerms:
    observable: Observable
    generator: GroupElement
    start: GroupElement
    table: PrimeTable

    def __call__(self, ns: np.ndarray) -> np.ndarray:
        weights = lambda_prime_array(self.table, ns)
        values = np.zeros(ns.size, dtype=np.complex128)
        support = weights != 0
        if support.any():
            seq = PolySequence.linear(self.generator)
            values[support] = weights[support] * _orbit_values(
                self.observable, seq, self.start, ns[support]
            )
        return values


def lambda_observable_sequence(
    observable: Observable, generator: GroupElement, start: GroupElement, table: PrimeTable
) -> IndexedSequence:
    """b_n = Lambda'(n) F(g^n x), supported on the primes."""
    return IndexedSequence(
        _LambdaObservableTerms(observable, generator, start, table), table.limit
    )


@dataclass(frozen=True)
class _LambdaTerms:
    table: PrimeTable

    def __call__(self, ns: np.ndarray) -> np.ndarray:
        return lambda_prime_array(self.table, ns)


def lambda_sequence(table: PrimeTable) -> IndexedSequence:
    """b_n = Lambda'(n)."""
    return IndexedSequence(_LambdaTerms(table), table.limit)


@dataclass(frozen=True)
class WeylSumKernel:
    """Unnormalized Weyl sums sum_n exp(2 pi i c.(n alpha)) for several vectors c."""

    alpha: GroupElement
    frequencies: tuple[tuple[int, ...], ...]

    def __call__(self, block: Block) -> list[complex]:
        ns = range(block[0] + 1, block[1] + 1)
        origin = GroupElement.identity(self.alpha.kind, self.alpha.dimension)
        coords = linear_orbit_hi64(self.alpha, origin, ns)
        return [
            exact_sum(np.exp(2j * np.pi * character_phases(coords, c))) for c in self.frequencies
        ]
