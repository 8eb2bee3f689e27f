"""Prime averages, W-trick identities, anti-correlation and Cauchy diagnostics."""

import itertools
import logging
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Sequence

import numpy as np

from src.application.interfaces.i_block_executor import IBlockExecutor
from src.application.services.kernels import (
    AveragingKernel,
    KernelBundle,
    BirkhoffKernel,
    LambdaAverageKernel,
    PrimeAverageKernel,
    RawCorrelationKernel,
    ResidueKernel,
    ResidueMode,
    WeylSumKernel,
    WStridedKernel,
    lambda_observable_sequence,
)
from src.domain.entities.average_series import AverageSeries
from src.domain.entities.averaging_results import (
    AntiCorrelation,
    CoprimeSplit,
    Decomposition,
    ExactSplit,
)
from src.domain.entities.observable import Observable
from src.domain.entities.poly_sequence import PolySequence
from src.domain.entities.prime_table import PrimeTable
from src.domain.exceptions.domain_exceptions import (
    ArgumentRangeError,
    ContractViolationError,
    ModelMismatchError,
)
from src.domain.services.nilsystem import horizontal_projection
from src.domain.services.summation import CompensatedSum, block_ranges, exact_sum
from src.domain.value_objects.group_element import GroupElement, ModelKind
from src.domain.value_objects.unit_frac import UnitFrac
from src.domain.value_objects.w_data import WData

logger = logging.getLogger(__name__)

SequenceAccessor = Callable[[np.ndarray], np.ndarray]

SUPPORT_SAMPLES = 64


def dyadic_checkpoints(N0: int, doublings: int) -> list[int]:
    if N0 < 1 or doublings < 0:
        raise ArgumentRangeError(f"Invalid dyadic grid N0={N0}, doublings={doublings}")
    return [N0 << j for j in range(doublings + 1)]


def level_vectors(dimension: int, level: int) -> list[tuple[int, ...]]:
    """Integer vectors with sup-norm ``level``, one of each +/- pair."""
    vectors = []
    for k in itertools.product(range(-level, level + 1), repeat=dimension):
        if max(abs(v) for v in k) != level:
            continue
        leading = next(v for v in k if v != 0)
        if leading > 0:
            vectors.append(k)
    return vectors


@dataclass
class AveragingService:
    """Every averaging object, summed on the fixed block grid of the executor."""

    executor: IBlockExecutor

    # -- block machinery -------------------------------------------------

    def _fold(self, kernel: AveragingKernel, lo: int, hi: int, acc: CompensatedSum) -> None:
        for block_sum in self.executor.map_ordered(kernel, block_ranges(lo, hi)):
            acc.add(block_sum)

    def average(self, kernel: AveragingKernel, N: int) -> complex:
        kernel.validate(N)
        acc = CompensatedSum()
        self._fold(kernel, 0, kernel.index_limit(N), acc)
        return acc.value / kernel.normalizer(N)

    def series(self, kernel: AveragingKernel, checkpoints: Sequence[int]) -> AverageSeries:
        """Averages at ascending checkpoints; each one only sums the new terms."""
        return self.series_many([kernel], checkpoints)[0]

    def series_many(
        self, kernels: Sequence[AveragingKernel], checkpoints: Sequence[int]
    ) -> list[AverageSeries]:
        """One series per kernel, with every block of every kernel in a single dispatch.

        Block sums are folded per kernel in checkpoint order, so each series is
        the same as summing its kernel on its own.
        """
        if not checkpoints:
            raise ArgumentRangeError("At least one checkpoint is required")
        if not kernels:
            raise ArgumentRangeError("At least one kernel is required")
        if any(a >= b for a, b in zip(checkpoints, checkpoints[1:])):
            raise ArgumentRangeError("Checkpoints must be strictly ascending")
        items: list[tuple[int, tuple[int, int]]] = []
        counts: list[list[int]] = []
        for i, kernel in enumerate(kernels):
            kernel.validate(checkpoints[0])
            kernel.validate(checkpoints[-1])
            done = 0
            per_checkpoint = []
            for N in checkpoints:
                limit = kernel.index_limit(N)
                blocks = block_ranges(done, limit)
                items.extend((i, block) for block in blocks)
                per_checkpoint.append(len(blocks))
                done = limit
            counts.append(per_checkpoint)
        sums = self.executor.map_ordered(KernelBundle(tuple(kernels)), items)

        result = []
        pos = 0
        for kernel, per_checkpoint in zip(kernels, counts):
            acc = CompensatedSum()
            values = []
            for N, count in zip(checkpoints, per_checkpoint):
                for block_sum in sums[pos : pos + count]:
                    acc.add(block_sum)
                pos += count
                values.append(acc.value / kernel.normalizer(N))
                logger.debug("%s N=%d value=%r", type(kernel).__name__, N, values[-1])
            result.append(AverageSeries.from_values(checkpoints, values))
        return result

    def dyadic_series(self, kernel: AveragingKernel, N0: int, doublings: int) -> AverageSeries:
        checkpoints = dyadic_checkpoints(N0, doublings)
        try:
            kernel.validate(checkpoints[-1])
        except ArgumentRangeError as e:
            raise ArgumentRangeError(f"Dyadic grid N0*2^{doublings} overflows: {e}") from e
        return self.series(kernel, checkpoints)

    # -- prime and Lambda' averages --------------------------------------

    def prime_avg(
        self, F: Observable, seq: PolySequence, x: GroupElement, N: int, table: PrimeTable
    ) -> complex:
        return self.average(PrimeAverageKernel(F, seq, x, table), N)

    def lambda_avg(
        self, F: Observable, seq: PolySequence, x: GroupElement, N: int, table: PrimeTable
    ) -> complex:
        return self.average(LambdaAverageKernel(F, seq, x, table), N)

    def prime_lambda_gap(
        self, F: Observable, seq: PolySequence, x: GroupElement, N: int, table: PrimeTable
    ) -> float:
        """|prime average - Lambda'-weighted average|."""
        return abs(self.prime_avg(F, seq, x, N, table) - self.lambda_avg(F, seq, x, N, table))

    def birkhoff_avg(self, F: Observable, seq: PolySequence, x: GroupElement, N: int) -> complex:
        return self.average(BirkhoffKernel(F, seq, x), N)

    def prime_birkhoff_gap(
        self, F: Observable, seq: PolySequence, x: GroupElement, N: int, table: PrimeTable
    ) -> float:
        return abs(self.prime_avg(F, seq, x, N, table) - self.birkhoff_avg(F, seq, x, N))

    # -- W-trick identities ----------------------------------------------

    @staticmethod
    def _sum_progression(b: SequenceAccessor, step: int, offset: int, first: int, last: int) -> complex:
        """sum_{n=first}^{last} b(step*n + offset), on the fixed block grid."""
        acc = CompensatedSum()
        for lo, hi in block_ranges(first - 1, last):
            ns = np.arange(lo + 1, hi + 1, dtype=np.int64)
            acc.add(exact_sum(np.asarray(b(step * ns + offset), dtype=np.complex128)))
        return acc.value

    def wtrick_exact_split(self, b: SequenceAccessor, W: int, N: int) -> ExactSplit:
        """(1/WN) sum_{n<=WN} b_n against (1/W) sum_{r=1}^W (1/N) sum_{n=0}^{N-1} b_{Wn+r}."""
        if W < 1 or N < 1:
            raise ArgumentRangeError(f"W and N must be positive, got W={W}, N={N}")
        WN = W * N
        lhs = self._sum_progression(b, 1, 0, 1, WN) / WN
        rhs = CompensatedSum()
        for r in range(1, W + 1):
            rhs.add(self._sum_progression(b, W, r, 0, N - 1) / N)
        return ExactSplit(lhs=lhs, rhs_full=rhs.value / W)

    @staticmethod
    def _sample_head_and_spread(values: np.ndarray) -> np.ndarray:
        """The first SUPPORT_SAMPLES entries plus an even spread over the rest."""
        spread = values[:: max(1, values.size // SUPPORT_SAMPLES)]
        return np.concatenate([values[:SUPPORT_SAMPLES], spread])

    @classmethod
    def _check_prime_support(cls, b: SequenceAccessor, limit: int, small_primes: Sequence[int]) -> None:
        evens = cls._sample_head_and_spread(np.arange(4, limit + 1, 2, dtype=np.int64))
        odd_squares = np.arange(3, isqrt(limit) + 1, 2, dtype=np.int64) ** 2
        parts = [evens, odd_squares[:SUPPORT_SAMPLES]]
        # odd multiples p*m (m >= 3) of the primes dividing W
        for p in small_primes:
            if p == 2 or 3 * p > limit:
                continue
            multiples = p * np.arange(3, limit // p + 1, 2, dtype=np.int64)
            parts.append(cls._sample_head_and_spread(multiples))
        sample = np.unique(np.concatenate(parts))
        if sample.size == 0:
            return
        values = np.asarray(b(sample), dtype=np.complex128)
        bad = np.flatnonzero(values != 0)
        if bad.size:
            raise ContractViolationError(
                f"Sequence is nonzero at composite index {int(sample[bad[0]])}"
            )

    @staticmethod
    def _leftover_terms(b: SequenceAccessor, wdata: WData, N: int) -> tuple[complex, complex]:
        """Primes dividing W and the n=0 / n=N shifts, each divided by WN."""
        W = wdata.W
        WN = W * N
        small = np.array([p for p in wdata.small_primes if p <= WN], dtype=np.int64)
        residues = np.array(wdata.coprime_residues, dtype=np.int64)
        small_terms = exact_sum(np.asarray(b(small), dtype=np.complex128)) if small.size else 0j
        head = exact_sum(np.asarray(b(residues), dtype=np.complex128))
        tail = exact_sum(np.asarray(b(WN + residues), dtype=np.complex128))
        return small_terms / WN, (head - tail) / WN

    def wtrick_coprime_form(self, b: SequenceAccessor, wdata: WData, N: int) -> CoprimeSplit:
        """Coprime-residue main term and residual = lhs - main.

        The leftover terms are enumerated independently so ``identity_error``
        measures how far the residual is from that enumeration.
        """
        if N < 1:
            raise ArgumentRangeError(f"N must be positive, got {N}")
        W = wdata.W
        WN = W * N
        self._check_prime_support(b, WN, wdata.small_primes)
        lhs = self._sum_progression(b, 1, 0, 1, WN) / WN
        main = CompensatedSum()
        for r in wdata.coprime_residues:
            main.add(self._sum_progression(b, W, r, 1, N) / N)
        small, boundary = self._leftover_terms(b, wdata, N)
        main_value = main.value / W
        return CoprimeSplit(
            lhs=lhs,
            main=main_value,
            residual=lhs - main_value,
            small_prime_terms=small,
            boundary_terms=boundary,
        )

    def wtrick_average(
        self, F: Observable, g: GroupElement, x: GroupElement, wdata: WData, N: int, table: PrimeTable
    ) -> complex:
        """(1/WN) sum_{n<=WN} Lambda'(n) F(g^n x)."""
        return self.average(WStridedKernel(F, g, x, wdata.W, table), N)

    # -- anti-correlation and the I + II decomposition -------------------

    @staticmethod
    def _require_w_table(wdata: WData, N: int, table: PrimeTable) -> None:
        if N < 1:
            raise ArgumentRangeError(f"N must be positive, got {N}")
        needed = wdata.W * N + max(wdata.coprime_residues)
        if needed > table.limit:
            raise ArgumentRangeError(
                f"W*N + max residue = {needed} exceeds the table limit {table.limit}"
            )

    def anticorr(
        self, F: Observable, g_lin: GroupElement, x: GroupElement, wdata: WData, N: int, table: PrimeTable
    ) -> AntiCorrelation:
        """max_r |(1/N) sum_{n<=N} (Lambda'_{r,omega}(n) - 1) F(g^{Wn+r} x)|."""
        self._require_w_table(wdata, N, table)
        per_r = tuple(
            (r, self.average(ResidueKernel(F, g_lin, x, wdata, r, table, ResidueMode.CORRELATION), N))
            for r in wdata.coprime_residues
        )
        return AntiCorrelation(per_r=per_r, max_abs=max(abs(v) for _, v in per_r))

    def anticorr_series(
        self, F: Observable, g_lin: GroupElement, x: GroupElement, wdata: WData,
        checkpoints: Sequence[int], table: PrimeTable,
    ) -> list[AntiCorrelation]:
        self._require_w_table(wdata, checkpoints[-1], table)
        residues = wdata.coprime_residues
        kernels = [
            ResidueKernel(F, g_lin, x, wdata, r, table, ResidueMode.CORRELATION) for r in residues
        ]
        per_r_series = dict(zip(residues, self.series_many(kernels, checkpoints)))
        results = []
        for j in range(len(checkpoints)):
            per_r = tuple((r, s.values[j]) for r, s in per_r_series.items())
            results.append(AntiCorrelation(per_r=per_r, max_abs=max(abs(v) for _, v in per_r)))
        return results

    def raw_correlation(
        self, F: Observable, g_lin: GroupElement, x: GroupElement, N: int, table: PrimeTable
    ) -> complex:
        """(1/N) sum_{n<=N} (Lambda'(n) - 1) F(g^n x) without the W-trick."""
        return self.average(RawCorrelationKernel(F, g_lin, x, table), N)

    def omega_sweep(
        self, F: Observable, g_lin: GroupElement, x: GroupElement, wdatas: Sequence[WData],
        N0: int, doublings: int, table: PrimeTable,
    ) -> dict[int, AverageSeries]:
        """max_abs of the anti-correlation along N, one series per omega.

        Read each series' tail first (limsup in N) and then compare across omega.
        """
        checkpoints = dyadic_checkpoints(N0, doublings)
        sweep = {}
        for wdata in wdatas:
            results = self.anticorr_series(F, g_lin, x, wdata, checkpoints, table)
            sweep[wdata.omega] = AverageSeries.from_values(
                checkpoints, [complex(a.max_abs) for a in results]
            )
        return sweep

    def decomposition(
        self, F: Observable, g_lin: GroupElement, x: GroupElement, wdata: WData, N: int, table: PrimeTable
    ) -> Decomposition:
        """I(N) + II(N) + remainder for (1/WN) sum_{n<=WN} Lambda'(n) F(g^n x)."""
        return self.decomposition_series(F, g_lin, x, wdata, [N], table)[0]

    def decomposition_series(
        self, F: Observable, g_lin: GroupElement, x: GroupElement, wdata: WData,
        checkpoints: Sequence[int], table: PrimeTable,
    ) -> list[Decomposition]:
        self._require_w_table(wdata, checkpoints[-1], table)
        phi = wdata.phi_W
        kernels: list[AveragingKernel] = [
            ResidueKernel(F, g_lin, x, wdata, r, table, mode)
            for mode in (ResidueMode.CORRELATION, ResidueMode.ORBIT)
            for r in wdata.coprime_residues
        ]
        kernels.append(WStridedKernel(F, g_lin, x, wdata.W, table))
        *per_residue, lhs_series = self.series_many(kernels, checkpoints)
        correlation, orbit = per_residue[:phi], per_residue[phi:]
        b = lambda_observable_sequence(F, g_lin, x, table)
        results = []
        for j, N in enumerate(checkpoints):
            I_acc, II_acc = CompensatedSum(), CompensatedSum()
            for s in correlation:
                I_acc.add(s.values[j])
            for s in orbit:
                II_acc.add(s.values[j])
            small, boundary = self._leftover_terms(b, wdata, N)
            results.append(
                Decomposition(
                    I_N=I_acc.value / phi,
                    II_N=II_acc.value / phi,
                    remainder=small + boundary,
                    lhs=lhs_series.values[j],
                )
            )
        return results

    # -- ergodicity diagnostics ------------------------------------------

    def weyl_totality_test(
        self, alpha: Sequence[UnitFrac], m_max: int, k_max: int, N: int
    ) -> np.ndarray:
        """Entry [m-1, j-1] is max |(1/N) sum_{n<=N} e(k.(m n alpha))| over |k|_inf = j."""
        if N < 1 or m_max < 1 or k_max < 1 or not alpha:
            raise ArgumentRangeError(
                f"Weyl test needs N, m_max, k_max >= 1 and a rotation, got N={N}, m_max={m_max}, k_max={k_max}"
            )
        element = GroupElement.torus(alpha)
        layout: list[tuple[int, int, tuple[int, ...]]] = []
        for m in range(1, m_max + 1):
            for j in range(1, k_max + 1):
                for k in level_vectors(len(alpha), j):
                    layout.append((m, j, tuple(m * v for v in k)))
        frequencies = tuple(dict.fromkeys(c for _, _, c in layout))
        index = {c: i for i, c in enumerate(frequencies)}
        totals = [CompensatedSum() for _ in frequencies]
        kernel = WeylSumKernel(element, frequencies)
        for sums in self.executor.map_ordered(kernel, block_ranges(0, N)):
            for acc, value in zip(totals, sums):
                acc.add(value)
        matrix = np.zeros((m_max, k_max), dtype=np.float64)
        for m, j, c in layout:
            modulus = abs(totals[index[c]].value) / N
            matrix[m - 1, j - 1] = max(matrix[m - 1, j - 1], modulus)
        return matrix

    def unique_ergodicity_probe(
        self, F: Observable, seq: PolySequence, starting_points: Sequence[GroupElement], N: int
    ) -> float:
        """Largest pairwise gap between Birkhoff averages from different starts."""
        return self.unique_ergodicity_series(F, seq, starting_points, [N]).final_value.real

    def unique_ergodicity_series(
        self, F: Observable, seq: PolySequence, starting_points: Sequence[GroupElement],
        checkpoints: Sequence[int],
    ) -> AverageSeries:
        if len(starting_points) < 2:
            raise ArgumentRangeError(
                f"At least two starting points are required, got {len(starting_points)}"
            )
        per_point = self.series_many(
            [BirkhoffKernel(F, seq, x) for x in starting_points], checkpoints
        )
        spreads = []
        for j in range(len(checkpoints)):
            values = [s.values[j] for s in per_point]
            spreads.append(
                complex(max(abs(a - b) for a, b in itertools.combinations(values, 2)))
            )
        return AverageSeries.from_values(checkpoints, spreads)

    # -- kernel factories for dyadic diagnostics -------------------------

    @staticmethod
    def prime_kernel(F: Observable, seq: PolySequence, x: GroupElement, table: PrimeTable) -> AveragingKernel:
        return PrimeAverageKernel(F, seq, x, table)

    @staticmethod
    def lambda_kernel(F: Observable, seq: PolySequence, x: GroupElement, table: PrimeTable) -> AveragingKernel:
        return LambdaAverageKernel(F, seq, x, table)

    @staticmethod
    def birkhoff_kernel(F: Observable, seq: PolySequence, x: GroupElement) -> AveragingKernel:
        return BirkhoffKernel(F, seq, x)

    @staticmethod
    def wtrick_kernel(
        F: Observable, g: GroupElement, x: GroupElement, wdata: WData, table: PrimeTable
    ) -> AveragingKernel:
        return WStridedKernel(F, g, x, wdata.W, table)


def kronecker_rotation(g: GroupElement) -> tuple[UnitFrac, ...]:
    """Rotation vector of the horizontal torus factor of a linear generator."""
    if g.kind is ModelKind.TORUS:
        return g.unit_fracs()
    if g.kind is ModelKind.HEISENBERG:
        return horizontal_projection(g).unit_fracs()
    raise ModelMismatchError(f"Unknown model {g.kind}")
