"""
Unit tests for the averaging service.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.application.services.averaging_service import (
    AveragingService,
    dyadic_checkpoints,
    kronecker_rotation,
    level_vectors,
)
from src.application.services.kernels import IndexedSequence, lambda_observable_sequence, lambda_sequence
from src.domain.entities.nilsystem_model import NilsystemModel
from src.domain.entities.observable import Observable
from src.domain.entities.poly_sequence import PolySequence
from src.domain.exceptions.domain_exceptions import (
    ArgumentRangeError,
    ContractViolationError,
    ModelMismatchError,
)
from src.domain.services.nilsystem import irrational_const, random_element
from src.domain.services.primes import chebyshev_theta, lambda_prime_array
from src.domain.value_objects.group_element import GroupElement
from src.domain.value_objects.unit_frac import UnitFrac
from src.infrastructure.parallel.block_executors import SerialBlockExecutor


@pytest.fixture
def zero_rotation() -> GroupElement:
    return GroupElement.torus([UnitFrac.zero()])


class TestHelpers:
    """Tests for module-level helpers."""

    def test_dyadic_checkpoints(self):
        assert dyadic_checkpoints(100, 3) == [100, 200, 400, 800]
        assert dyadic_checkpoints(7, 0) == [7]

    @pytest.mark.parametrize("n0,doublings", [(0, 3), (10, -1)])
    def test_dyadic_checkpoints_invalid(self, n0, doublings):
        with pytest.raises(ArgumentRangeError):
            dyadic_checkpoints(n0, doublings)

    def test_level_vectors(self):
        """Test one representative per +/- pair at each sup-norm."""
        assert level_vectors(1, 2) == [(2,)]
        assert sorted(level_vectors(2, 1)) == [(0, 1), (1, -1), (1, 0), (1, 1)]
        assert len(level_vectors(3, 2)) == (5**3 - 3**3) // 2

    def test_kronecker_rotation_torus(self, sqrt2_rotation):
        assert kronecker_rotation(sqrt2_rotation) == (irrational_const("sqrt2m1"),)

    def test_kronecker_rotation_heisenberg(self, heis_generator):
        """Test projection onto the horizontal torus."""
        assert kronecker_rotation(heis_generator) == (
            irrational_const("sqrt2m1"),
            irrational_const("sqrt3m1"),
        )


class TestPrimeAverages:
    """Tests for prime and Lambda'-weighted averages."""

    def test_constant_prime_average_is_one(self, service, constant_one, sqrt2_sequence, torus_origin, small_table):
        assert service.prime_avg(constant_one, sqrt2_sequence, torus_origin, 10**4, small_table) == 1.0

    def test_constant_lambda_average_is_theta_ratio(
        self, service, constant_one, sqrt2_sequence, torus_origin, small_table
    ):
        value = service.lambda_avg(constant_one, sqrt2_sequence, torus_origin, 10**4, small_table)
        assert value.real == pytest.approx(chebyshev_theta(small_table, 10**4) / 10**4, rel=1e-13)

    def test_prime_lambda_gap(self, service, constant_one, sqrt2_sequence, torus_origin, small_table):
        """Test |1 - theta(N)/N| for the constant observable."""
        gap = service.prime_lambda_gap(constant_one, sqrt2_sequence, torus_origin, 10**4, small_table)
        assert gap == pytest.approx(abs(1 - chebyshev_theta(small_table, 10**4) / 10**4), abs=1e-12)
        assert gap < 0.02

    def test_half_rotation(self, service, character_1, half_sequence, torus_origin, tiny_table):
        """Test e(p/2): +1 at p = 2 and -1 at the 24 odd primes below 100."""
        value = service.prime_avg(character_1, half_sequence, torus_origin, 100, tiny_table)
        assert value == pytest.approx(-23 / 25, abs=1e-12)

    def test_prime_birkhoff_gap(self, service, character_1, half_sequence, torus_origin, tiny_table):
        gap = service.prime_birkhoff_gap(character_1, half_sequence, torus_origin, 100, tiny_table)
        assert gap == pytest.approx(23 / 25, abs=1e-12)

    def test_irrational_rotation_equidistributes(
        self, service, character_1, sqrt2_sequence, torus_origin, medium_table
    ):
        """Test that e(p alpha) averages to a small value."""
        value = service.prime_avg(character_1, sqrt2_sequence, torus_origin, 10**5, medium_table)
        assert abs(value) < 0.05

    def test_model_mismatch(self, service, theta_8, sqrt2_sequence, torus_origin, tiny_table):
        with pytest.raises(ModelMismatchError):
            service.prime_avg(theta_8, sqrt2_sequence, torus_origin, 100, tiny_table)

    def test_beyond_table(self, service, constant_one, sqrt2_sequence, torus_origin, tiny_table):
        with pytest.raises(ArgumentRangeError):
            service.prime_avg(constant_one, sqrt2_sequence, torus_origin, 101, tiny_table)


class TestSeries:
    """Tests for incremental series along checkpoints."""

    def test_constant_birkhoff_series(self, service, constant_one, sqrt2_sequence, torus_origin):
        kernel = service.birkhoff_kernel(constant_one, sqrt2_sequence, torus_origin)
        series = service.dyadic_series(kernel, 64, 5)
        assert series.values == (1.0,) * 6
        assert series.max_tail_delta() == 0.0

    def test_zero_rotation_is_constant(self, service, character_1, zero_rotation, torus_origin):
        """Test that alpha = 0 keeps F(x) at every step."""
        kernel = service.birkhoff_kernel(character_1, PolySequence.linear(zero_rotation), torus_origin)
        series = service.dyadic_series(kernel, 10, 4)
        assert all(v == 1.0 for v in series.values)

    def test_incremental_matches_direct(
        self, service, theta_8, heis_generator, heis_origin, small_table
    ):
        """Test that an incremental series agrees with direct averages."""
        kernel = service.lambda_kernel(theta_8, PolySequence.linear(heis_generator), heis_origin, small_table)
        series = service.series(kernel, [100, 1000, 5000, 10**4])
        for N, value in zip(series.checkpoints, series.values):
            assert abs(value - service.average(kernel, N)) <= 1e-12

    def test_overflowing_grid(self, service, constant_one, sqrt2_sequence, torus_origin, small_table):
        """Test that a grid reaching past the table is refused."""
        kernel = service.prime_kernel(constant_one, sqrt2_sequence, torus_origin, small_table)
        with pytest.raises(ArgumentRangeError, match="overflows"):
            service.dyadic_series(kernel, 1024, 4)

    def test_empty_checkpoints(self, service, constant_one, sqrt2_sequence, torus_origin):
        kernel = service.birkhoff_kernel(constant_one, sqrt2_sequence, torus_origin)
        with pytest.raises(ArgumentRangeError):
            service.series(kernel, [])

    def test_series_many_matches_single_series(
        self, service, theta_8, heis_generator, heis_origin, small_table
    ):
        """Test that dispatching kernels together changes no bit of any series."""
        seq = PolySequence.linear(heis_generator)
        kernels = [
            service.lambda_kernel(theta_8, seq, heis_origin, small_table),
            service.birkhoff_kernel(theta_8, seq, heis_origin),
        ]
        checkpoints = [100, 2000, 10**4]
        together = service.series_many(kernels, checkpoints)
        assert together == [service.series(k, checkpoints) for k in kernels]

    def test_series_many_rejects_unordered_checkpoints(self, service, constant_one, sqrt2_sequence, torus_origin):
        kernel = service.birkhoff_kernel(constant_one, sqrt2_sequence, torus_origin)
        with pytest.raises(ArgumentRangeError, match="ascending"):
            service.series_many([kernel], [100, 100])
        with pytest.raises(ArgumentRangeError):
            service.series_many([], [100])


class TestWTrick:
    """Tests for the W-trick identities."""

    def test_exact_split(self, service, small_table):
        """Test that W-reindexing reproduces the plain average."""
        split = service.wtrick_exact_split(lambda_sequence(small_table), 30, 300)
        assert split.relative_gap <= 1e-13

    def test_exact_split_arbitrary_sequence(self, service, rng):
        values = rng.normal(size=1001)
        b = IndexedSequence(lambda ns: values[ns], 1000)
        split = service.wtrick_exact_split(b, 7, 100)
        assert split.lhs == pytest.approx(values[1:701].sum() / 700, abs=1e-12)
        assert split.relative_gap <= 1e-12

    @pytest.mark.parametrize("W,N", [(0, 10), (6, 0)])
    def test_exact_split_invalid(self, service, small_table, W, N):
        with pytest.raises(ArgumentRangeError):
            service.wtrick_exact_split(lambda_sequence(small_table), W, N)

    def test_coprime_residual_pinned(self, service, w3, small_table):
        """Test the enumerated residual for W = 6, N = 10."""
        split = service.wtrick_coprime_form(lambda_sequence(small_table), w3, 10)
        expected = (math.log(2) + math.log(3) + math.log(5) - math.log(61)) / 60
        assert split.residual == pytest.approx(expected, abs=1e-14)
        assert split.small_prime_terms == pytest.approx((math.log(2) + math.log(3)) / 60, abs=1e-15)
        assert split.identity_error <= 1e-13

    def test_coprime_form_observable(self, service, theta_8, heis_generator, heis_origin, w5, small_table):
        b = lambda_observable_sequence(theta_8, heis_generator, heis_origin, small_table)
        split = service.wtrick_coprime_form(b, w5, 300)
        assert split.identity_error <= 1e-12

    def test_coprime_form_rejects_composite_support(self, service, w3):
        """Test that sequences not supported on primes are refused."""
        b = IndexedSequence(lambda ns: np.ones(ns.size), 10**4)
        with pytest.raises(ContractViolationError):
            service.wtrick_coprime_form(b, w3, 100)

    def test_coprime_form_rejects_odd_multiple_of_w_prime(self, service, small_table, w3):
        """Test that a composite such as 15 = 3 * 5 sharing a factor with W is caught."""

        def perturbed(ns: np.ndarray) -> np.ndarray:
            return lambda_prime_array(small_table, ns) + 5.0 * (ns == 15)

        b = IndexedSequence(perturbed, 10**4)
        with pytest.raises(ContractViolationError, match="15"):
            service.wtrick_coprime_form(b, w3, 100)

    def test_coprime_residual_is_lhs_minus_main(self, service, w5, small_table):
        split = service.wtrick_coprime_form(lambda_sequence(small_table), w5, 300)
        assert split.residual == split.lhs - split.main
        assert split.identity_error <= 1e-13

    def test_wtrick_average(self, service, constant_one, sqrt2_rotation, torus_origin, w3, small_table):
        """Test that the constant W-average is theta(WN)/WN."""
        value = service.wtrick_average(constant_one, sqrt2_rotation, torus_origin, w3, 1000, small_table)
        assert value.real == pytest.approx(chebyshev_theta(small_table, 6000) / 6000, rel=1e-13)


class TestAntiCorrelation:
    """Tests for the W-tricked anti-correlation and its raw counterpart."""

    def test_raw_correlation_third(self, service, character_1, third_rotation, torus_origin, medium_table):
        """Test that primes split evenly mod 3, giving about -1/2."""
        value = service.raw_correlation(character_1, third_rotation, torus_origin, 10**5, medium_table)
        assert value.real == pytest.approx(-0.5, abs=0.02)
        assert abs(value.imag) < 0.02

    def test_anticorr_third_is_small(self, service, character_1, third_rotation, torus_origin, w3, small_table):
        """Test that the W-trick removes the mod 3 bias."""
        result = service.anticorr(character_1, third_rotation, torus_origin, w3, 1600, small_table)
        assert [r for r, _ in result.per_r] == [1, 5]
        assert result.max_abs < 0.05
        assert result.worst_residue in (1, 5)

    def test_anticorr_table_guard(self, service, character_1, third_rotation, torus_origin, w3, small_table):
        with pytest.raises(ArgumentRangeError, match="table limit"):
            service.anticorr(character_1, third_rotation, torus_origin, w3, 1700, small_table)

    def test_series_matches_pointwise(self, service, theta_8, heis_generator, heis_origin, w3, small_table):
        results = service.anticorr_series(theta_8, heis_generator, heis_origin, w3, [200, 400, 800], small_table)
        direct = service.anticorr(theta_8, heis_generator, heis_origin, w3, 800, small_table)
        assert results[-1].max_abs == pytest.approx(direct.max_abs, abs=1e-12)

    def test_omega_sweep(self, service, theta_8, heis_generator, heis_origin, w3, w5, small_table):
        sweep = service.omega_sweep(theta_8, heis_generator, heis_origin, [w3, w5], 64, 2, small_table)
        assert set(sweep) == {3, 5}
        for series in sweep.values():
            assert series.checkpoints == (64, 128, 256)
            assert all(v.imag == 0 and v.real >= 0 for v in series.values)


class TestDecomposition:
    """Tests for the I + II + remainder decomposition."""

    def test_reconstruction(self, service, theta_8, heis_generator, heis_origin, w3, small_table):
        result = service.decomposition(theta_8, heis_generator, heis_origin, w3, 1000, small_table)
        assert result.reconstruction_error <= 1e-12
        lhs = service.wtrick_average(theta_8, heis_generator, heis_origin, w3, 1000, small_table)
        assert result.lhs == pytest.approx(lhs, abs=1e-12)

    def test_random_configurations(self, service, w3, w5, small_table, rng):
        """Test the decomposition on 20 random generators, starts and sizes."""
        heis = NilsystemModel.heisenberg()
        torus = NilsystemModel.torus(2)
        for i in range(20):
            model, F = (heis, Observable.heis_theta(8)) if i % 2 else (torus, Observable.torus_character([1, 2]))
            wdata = w5 if i % 3 == 0 else w3
            N = int(rng.integers(10, (small_table.limit - wdata.W) // wdata.W))
            g, x = random_element(model, rng), random_element(model, rng)
            result = service.decomposition(F, g, x, wdata, N, small_table)
            assert result.reconstruction_error <= 1e-10

    def test_series_final_matches_single(self, service, theta_8, heis_generator, heis_origin, w3, small_table):
        series = service.decomposition_series(theta_8, heis_generator, heis_origin, w3, [250, 500, 1000], small_table)
        single = service.decomposition(theta_8, heis_generator, heis_origin, w3, 1000, small_table)
        assert series[-1].remainder == single.remainder
        assert abs(series[-1].I_N - single.I_N) <= 1e-12


class TestErgodicity:
    """Tests for the Weyl totality test and the unique ergodicity probe."""

    def test_weyl_half_rotation(self, service):
        """Test that m = 2 kills the rotation by 1/2."""
        matrix = service.weyl_totality_test([UnitFrac.from_ratio(1, 2)], 2, 1, 1000)
        assert matrix.shape == (2, 1)
        assert matrix[1, 0] == 1.0
        assert matrix[0, 0] == pytest.approx(0.0, abs=1e-12)

    def test_weyl_golden_rotation(self, service):
        matrix = service.weyl_totality_test([irrational_const("golden")], 5, 3, 10**4)
        assert matrix.shape == (5, 3)
        assert matrix.max() < 0.01

    def test_weyl_two_dimensional_resonance(self, service):
        """Test that (1/3, 2/3) is caught by k = (1, 1)."""
        alpha = [UnitFrac.from_ratio(1, 3), UnitFrac.from_ratio(2, 3)]
        matrix = service.weyl_totality_test(alpha, 1, 1, 999)
        assert matrix[0, 0] == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("m_max,k_max,N", [(0, 1, 10), (1, 0, 10), (1, 1, 0)])
    def test_weyl_invalid(self, service, m_max, k_max, N):
        with pytest.raises(ArgumentRangeError):
            service.weyl_totality_test([UnitFrac.from_ratio(1, 2)], m_max, k_max, N)

    def test_probe_detects_non_ergodic(self, service, character_1, zero_rotation):
        """Test that alpha = 0 from starts 0 and 1/2 gives spread 2."""
        points = [GroupElement.torus([UnitFrac.zero()]), GroupElement.torus([UnitFrac.from_ratio(1, 2)])]
        spread = service.unique_ergodicity_probe(character_1, PolySequence.linear(zero_rotation), points, 1000)
        assert spread == pytest.approx(2.0, abs=1e-12)

    def test_probe_irrational(self, service, character_1, sqrt2_sequence, rng):
        model = NilsystemModel.torus(1)
        points = [random_element(model, rng) for _ in range(5)]
        assert service.unique_ergodicity_probe(character_1, sqrt2_sequence, points, 10**4) < 0.01

    def test_probe_needs_two_points(self, service, character_1, sqrt2_sequence, torus_origin):
        with pytest.raises(ArgumentRangeError):
            service.unique_ergodicity_probe(character_1, sqrt2_sequence, [torus_origin], 100)


def test_service_uses_executor(serial_executor):
    assert AveragingService(executor=serial_executor).executor.workers == 1


class TestWorkedExamples:
    """Small hand-checkable values."""

    def test_prime_average_half_rotation_to_ten(self, service, character_1, half_sequence, torus_origin, tiny_table):
        """Test primes 2, 3, 5, 7 giving 1, -1, -1, -1."""
        value = service.prime_avg(character_1, half_sequence, torus_origin, 10, tiny_table)
        assert value == pytest.approx(-0.5, abs=1e-12)

    def test_lambda_average_to_ten(self, service, constant_one, sqrt2_sequence, torus_origin, tiny_table):
        value = service.lambda_avg(constant_one, sqrt2_sequence, torus_origin, 10, tiny_table)
        assert value.real == pytest.approx(math.log(210) / 10, abs=1e-14)
        gap = service.prime_lambda_gap(constant_one, sqrt2_sequence, torus_origin, 10, tiny_table)
        assert gap == pytest.approx(1 - math.log(210) / 10, abs=1e-14)

    def test_birkhoff_half_rotation(self, service, character_1, half_sequence, torus_origin):
        assert service.birkhoff_avg(character_1, half_sequence, torus_origin, 2) == pytest.approx(0, abs=1e-15)

    def test_exact_split_identity_sequence(self, service):
        """Test b_n = n with W = 2, N = 3."""
        b = IndexedSequence(lambda ns: ns.astype(np.float64), 6)
        split = service.wtrick_exact_split(b, 2, 3)
        assert split.lhs == 3.5
        assert split.rhs_full == 3.5

    def test_exact_split_ones(self, service):
        b = IndexedSequence(lambda ns: np.ones(ns.size), 60)
        split = service.wtrick_exact_split(b, 6, 10)
        assert split.lhs == split.rhs_full == 1.0

    def test_coprime_form_zero(self, service, w3):
        b = IndexedSequence(lambda ns: np.zeros(ns.size), 10**4)
        split = service.wtrick_coprime_form(b, w3, 10)
        assert split.main == 0
        assert split.residual == 0

    def test_constant_second_term_is_one(self, service, constant_one, sqrt2_rotation, torus_origin, w5, small_table):
        result = service.decomposition(constant_one, sqrt2_rotation, torus_origin, w5, 300, small_table)
        assert result.II_N == 1.0

    def test_weyl_fixed_point(self, service):
        matrix = service.weyl_totality_test([UnitFrac.zero()], 3, 2, 100)
        assert (matrix == 1.0).all()

    def test_zero_observable_series(self, service, sqrt2_sequence, torus_origin, small_table):
        kernel = service.prime_kernel(Observable.constant(0.0), sqrt2_sequence, torus_origin, small_table)
        series = service.dyadic_series(kernel, 16, 3)
        assert all(v == 0 for v in series.values)

    def test_probe_constant(self, service, constant_one, sqrt2_sequence, rng):
        points = [random_element(NilsystemModel.torus(1), rng) for _ in range(3)]
        assert service.unique_ergodicity_probe(constant_one, sqrt2_sequence, points, 500) == 0.0


@settings(max_examples=50, deadline=None)
@given(
    values=st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=400),
    W=st.integers(1, 12),
)
def test_reindexing_is_a_permutation(values, W):
    """Test both sides of the W-split agree for arbitrary sequences."""
    N = max(1, len(values) // W)
    data = np.zeros(W * N + 1)
    data[1 : min(len(values), W * N) + 1] = values[: W * N]
    b = IndexedSequence(lambda ns: data[ns], W * N)
    split = AveragingService(SerialBlockExecutor()).wtrick_exact_split(b, W, N)
    assert abs(split.lhs - split.rhs_full) <= 1e-12 * max(1.0, float(np.abs(data).max()))
