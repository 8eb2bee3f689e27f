"""
Shared pytest fixtures for all tests.
"""

from typing import Iterator

import numpy as np
import pytest

from src.application.services.averaging_service import AveragingService
from src.domain.entities.observable import Observable
from src.domain.entities.poly_sequence import PolySequence
from src.domain.entities.prime_table import PrimeTable
from src.domain.services.nilsystem import irrational_const
from src.domain.services.primes import make_w, sieve
from src.domain.value_objects.group_element import GroupElement, ModelKind
from src.domain.value_objects.unit_frac import UnitFrac
from src.domain.value_objects.w_data import WData
from src.infrastructure.config.settings import get_settings
from src.infrastructure.parallel.block_executors import (
    ProcessPoolBlockExecutor,
    SerialBlockExecutor,
)


# ============================================================================
# Prime Table Fixtures
# ============================================================================


@pytest.fixture(scope="session")
def tiny_table() -> PrimeTable:
    return sieve(100)


@pytest.fixture(scope="session")
def small_table() -> PrimeTable:
    return sieve(10**4)


@pytest.fixture(scope="session")
def medium_table() -> PrimeTable:
    return sieve(10**5)


@pytest.fixture(scope="session")
def w3(small_table: PrimeTable) -> WData:
    return make_w(3, small_table)


@pytest.fixture(scope="session")
def w5(small_table: PrimeTable) -> WData:
    return make_w(5, small_table)


# ============================================================================
# Group Element Fixtures
# ============================================================================


@pytest.fixture
def sqrt2_rotation() -> GroupElement:
    return GroupElement.torus([irrational_const("sqrt2m1")])


@pytest.fixture
def half_rotation() -> GroupElement:
    return GroupElement.torus([UnitFrac.from_ratio(1, 2)])


@pytest.fixture
def third_rotation() -> GroupElement:
    return GroupElement.torus([UnitFrac.from_ratio(1, 3)])


@pytest.fixture
def torus_origin() -> GroupElement:
    return GroupElement.identity(ModelKind.TORUS, 1)


@pytest.fixture
def heis_generator() -> GroupElement:
    return GroupElement.heisenberg(
        irrational_const("sqrt2m1").value, irrational_const("sqrt3m1").value, 0
    )


@pytest.fixture
def heis_origin() -> GroupElement:
    return GroupElement.identity(ModelKind.HEISENBERG, 3)


@pytest.fixture
def sqrt2_sequence(sqrt2_rotation: GroupElement) -> PolySequence:
    return PolySequence.linear(sqrt2_rotation)


@pytest.fixture
def half_sequence(half_rotation: GroupElement) -> PolySequence:
    return PolySequence.linear(half_rotation)


# ============================================================================
# Observable Fixtures
# ============================================================================


@pytest.fixture
def constant_one() -> Observable:
    return Observable.constant(1.0)


@pytest.fixture
def character_1() -> Observable:
    return Observable.torus_character([1])


@pytest.fixture
def theta_8() -> Observable:
    return Observable.heis_theta(8)


# ============================================================================
# Executor and Service Fixtures
# ============================================================================


@pytest.fixture
def serial_executor() -> SerialBlockExecutor:
    return SerialBlockExecutor()


@pytest.fixture
def process_executor() -> Iterator[ProcessPoolBlockExecutor]:
    executor = ProcessPoolBlockExecutor(workers=2)
    yield executor
    executor.close()


@pytest.fixture
def service(serial_executor: SerialBlockExecutor) -> AveragingService:
    return AveragingService(executor=serial_executor)


@pytest.fixture
def rng() -> np.random.Generator:
    """Counter-based generator so every randomized test is reproducible."""
    return np.random.Generator(np.random.Philox(20240601))


# ============================================================================
# Settings
# ============================================================================


@pytest.fixture(autouse=True)
def fresh_settings() -> Iterator[None]:
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
