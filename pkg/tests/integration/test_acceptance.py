"""
Desk-scale acceptance checks at N around 10^6.

Run with ``pytest -m slow``; the fast suite covers the same identities at
smaller sizes.
"""

import math

import numpy as np
import pytest

from src.application.services.averaging_service import AveragingService
from src.application.services.kernels import lambda_observable_sequence, lambda_sequence
from src.application.use_cases import ResourceLimits, RunExperimentUseCase, parse_experiment_config
from src.domain.entities.nilsystem_model import NilsystemModel
from src.domain.entities.observable import Observable
from src.domain.entities.poly_sequence import PolySequence
from src.domain.entities.prime_table import PrimeTable
from src.domain.services.nilsystem import irrational_const, random_element
from src.domain.services.primes import chebyshev_theta, make_w, sieve, trial_division_is_prime
from src.domain.value_objects.group_element import GroupElement
from src.domain.value_objects.unit_frac import UnitFrac
from src.infrastructure.parallel.block_executors import ProcessPoolBlockExecutor, SerialBlockExecutor
from src.infrastructure.repositories.file_result_repository import FileResultRepository

pytestmark = pytest.mark.slow

N_BIG = 10**6


@pytest.fixture(scope="module")
def large_table() -> PrimeTable:
    return sieve(1 << 20)


@pytest.fixture(scope="module")
def svc() -> AveragingService:
    return AveragingService(SerialBlockExecutor())


@pytest.fixture
def sqrt2_char():
    alpha = GroupElement.torus([irrational_const("sqrt2m1")])
    return Observable.torus_character([1]), PolySequence.linear(alpha), GroupElement.torus([UnitFrac.zero()])


@pytest.fixture
def heis_theta():
    g = GroupElement.heisenberg(irrational_const("sqrt2m1").value, irrational_const("sqrt3m1").value, 0)
    return Observable.heis_theta(8), PolySequence.linear(g), GroupElement.heisenberg(0, 0, 0)


class TestPrimeTables:
    """Sieve and Chebyshev checks."""

    def test_prime_counts(self, large_table):
        assert large_table.pi(10**4) == 1229
        assert large_table.pi(N_BIG) == 78498
        flags = [trial_division_is_prime(n) for n in range(N_BIG - 2000, N_BIG + 1)]
        assert flags == large_table.is_prime[N_BIG - 2000 : N_BIG + 1].tolist()

    def test_chebyshev(self, large_table):
        assert abs(1 - chebyshev_theta(large_table, N_BIG) / N_BIG) <= 0.01


class TestWTrickIdentities:
    """Reindexing and coprime-form identities at scale."""

    @pytest.mark.parametrize("omega", [2, 3, 5])
    @pytest.mark.parametrize("N", [10, 10**3, 10**4])
    def test_exact_reindexing(self, svc, large_table, omega, N):
        wdata = make_w(omega, large_table)
        split = svc.wtrick_exact_split(lambda_sequence(large_table), wdata.W, N)
        assert split.relative_gap <= 1e-12

    @pytest.mark.parametrize("omega", [3, 5])
    def test_coprime_residual_enumerated(self, svc, large_table, omega):
        """Test the residual against direct enumeration of the leftover terms."""
        N = 10**4
        wdata = make_w(omega, large_table)
        W = wdata.W
        WN = W * N
        split = svc.wtrick_coprime_form(lambda_sequence(large_table), wdata, N)

        def lam(n: int) -> float:
            return math.log(n) if large_table.contains(n) else 0.0

        leftover = [math.log(p) for p in wdata.small_primes]
        leftover += [lam(r) for r in wdata.coprime_residues]
        leftover += [-lam(WN + r) for r in wdata.coprime_residues]
        assert split.residual.real == pytest.approx(math.fsum(leftover) / WN, abs=1e-14)
        assert abs(split.residual) <= (omega + 2 * wdata.phi_W) * math.log(WN + W) / WN
        assert split.identity_error <= 1e-12 * abs(split.lhs)

    def test_theta_observable_coprime_form(self, svc, large_table, heis_theta):
        F, seq, x = heis_theta
        wdata = make_w(5, large_table)
        b = lambda_observable_sequence(F, seq.generators[0], x, large_table)
        split = svc.wtrick_coprime_form(b, wdata, 10**4)
        WN = wdata.W * 10**4
        bound = (5 + 2 * wdata.phi_W) * F.sup_bound * math.log(WN + wdata.W) / WN
        assert abs(split.residual) <= bound


class TestGapDecay:
    """Prime average against the Lambda'-weighted average."""

    @pytest.mark.parametrize("case", ["sqrt2_char", "heis_theta"])
    def test_prime_lambda_gap_decays(self, svc, large_table, case, request):
        F, seq, x = request.getfixturevalue(case)
        late = svc.prime_lambda_gap(F, seq, x, N_BIG, large_table)
        early = svc.prime_lambda_gap(F, seq, x, 10**4, large_table)
        assert late <= 0.02
        assert late < early

    def test_prime_lambda_gap_triangle(self, svc, large_table, heis_theta):
        F, seq, x = heis_theta
        gap = svc.prime_lambda_gap(F, seq, x, 10**5, large_table)
        prime = svc.prime_avg(F, seq, x, 10**5, large_table)
        lam = svc.lambda_avg(F, seq, x, 10**5, large_table)
        assert gap <= abs(prime) + abs(lam)


class TestAntiCorrelation:
    """The W-trick removes local obstructions from Lambda'."""

    def test_raw_versus_wtricked(self, svc, large_table):
        third = GroupElement.torus([UnitFrac.from_ratio(1, 3)])
        origin = GroupElement.torus([UnitFrac.zero()])
        F = Observable.torus_character([1])
        raw = svc.raw_correlation(F, third, origin, 10**5, large_table)
        assert 0.4 <= abs(raw) <= 0.6
        result = svc.anticorr(F, third, origin, make_w(3, large_table), 10**5, large_table)
        assert result.max_abs <= 0.05

    def test_constant_observable(self, svc, large_table):
        origin = GroupElement.torus([UnitFrac.zero()])
        g = GroupElement.torus([irrational_const("sqrt2m1")])
        result = svc.anticorr(Observable.constant(1.0), g, origin, make_w(3, large_table), 10**5, large_table)
        assert result.max_abs <= 0.05

    def test_decomposition_sizes(self, svc, large_table, sqrt2_char):
        F, seq, x = sqrt2_char
        result = svc.decomposition(F, seq.generators[0], x, make_w(3, large_table), 10**5, large_table)
        assert abs(result.II_N) <= 0.02
        assert abs(result.I_N) <= 0.1
        assert result.reconstruction_error <= 1e-10 * max(abs(result.lhs), 1.0)


class TestLinearLimitDeskCheck:
    """Prime averages approach the space mean in the linear case."""

    def test_torus(self, svc, large_table, sqrt2_char):
        F, seq, x = sqrt2_char
        assert abs(svc.prime_avg(F, seq, x, N_BIG, large_table)) <= 0.05

    def test_heisenberg(self, svc, large_table, heis_theta):
        F, seq, x = heis_theta
        assert abs(svc.prime_avg(F, seq, x, N_BIG, large_table)) <= 0.1
        series = svc.dyadic_series(svc.prime_kernel(F, seq, x, large_table), 1 << 10, 10)
        assert series.max_tail_delta(3) <= 0.05

    def test_torus_cauchy(self, svc, large_table, sqrt2_char):
        F, seq, x = sqrt2_char
        series = svc.dyadic_series(svc.prime_kernel(F, seq, x, large_table), 1 << 10, 10)
        assert series.max_tail_delta(3) <= 0.05

    def test_polynomial_cauchy(self, svc, large_table):
        """Test g1^{n^2} g2^n along primes (no limit value asserted)."""
        g1 = GroupElement.heisenberg(irrational_const("sqrt2m1").value, irrational_const("sqrt3m1").value, 0)
        g2 = GroupElement.heisenberg(irrational_const("golden").value, irrational_const("sqrt2m1").value, 0)
        seq = PolySequence((g1, g2), ((0, 0, 1), (0, 1)))
        kernel = svc.prime_kernel(Observable.heis_theta(8), seq, GroupElement.heisenberg(0, 0, 0), large_table)
        series = svc.dyadic_series(kernel, 1 << 10, 10)
        assert series.max_tail_delta(3) <= 0.1


class TestErgodicityProxies:
    """Weyl totality and unique ergodicity at N = 10^6."""

    def test_weyl(self, svc):
        matrix = svc.weyl_totality_test([irrational_const("sqrt2m1")], 5, 3, N_BIG)
        assert matrix.max() <= 0.01
        half = svc.weyl_totality_test([UnitFrac.from_ratio(1, 2)], 2, 1, N_BIG)
        assert half[1, 0] == 1.0

    def test_birkhoff_small(self, svc, sqrt2_char):
        F, seq, x = sqrt2_char
        assert abs(svc.birkhoff_avg(F, seq, x, N_BIG)) <= 1e-4

    def test_spread(self, svc, sqrt2_char):
        F, seq, _ = sqrt2_char
        rng = np.random.Generator(np.random.Philox(12345))
        points = [random_element(NilsystemModel.torus(1), rng) for _ in range(5)]
        assert svc.unique_ergodicity_probe(F, seq, points, N_BIG) <= 0.02


class TestDeterminism:
    """Worker count never changes the bytes written."""

    def test_one_versus_eight_workers(self, tmp_path):
        config = parse_experiment_config(
            {
                "experiment": "converge-prime",
                "model": "heisenberg",
                "generators": [["sqrt2m1", "sqrt3m1", 0]],
                "observable": {"kind": "heis-theta"},
                "n0": 1 << 10,
                "doublings": 10,
            }
        )
        limits = ResourceLimits(max_sieve_limit=10**8, max_work=10**9)
        outputs = []
        for workers in (1, 8):
            out = tmp_path / f"w{workers}"
            executor = SerialBlockExecutor() if workers == 1 else ProcessPoolBlockExecutor(workers)
            try:
                RunExperimentUseCase(AveragingService(executor), FileResultRepository(out), limits).execute(config)
            finally:
                executor.close()
            outputs.append((out / "series.csv").read_bytes())
        assert outputs[0] == outputs[1]
