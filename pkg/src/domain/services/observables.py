"""Evaluation and space means of the built-in observables.

Phases such as k.x or z + m x are formed exactly in fixed point (128-bit for
single elements, wrapping uint64 for batches) and only then converted to
floating point, so characters keep modulus 1 and Gamma-invariance is exact up
to theta truncation.
"""

import cmath
import math
from typing import Sequence

import numpy as np

from ..entities.nilsystem_model import NilsystemModel
from ..entities.observable import Observable, ObservableKind
from ..exceptions.domain_exceptions import (
    ArgumentRangeError,
    ModelMismatchError,
    ResourceGuardError,
)
from ..value_objects.group_element import GroupElement, ModelKind
from ..value_objects.unit_frac import MASK, ONE

TWO_PI = 2.0 * math.pi
_TWO_64 = float(2**64)
_U64_MOD = 2**64
MAX_QUADRATURE_POINTS = 1 << 24


def _check_model(obs: Observable, kind: ModelKind, dimension: int) -> None:
    expected = obs.model_kind
    if expected is not None and expected is not kind:
        raise ModelMismatchError(f"{obs.describe()} cannot be evaluated on a {kind.value} point")
    if obs.kind is ObservableKind.TORUS_CHARACTER and len(obs.frequencies) != dimension:
        raise ModelMismatchError(
            f"Character of length {len(obs.frequencies)} on a {dimension}-torus"
        )


def _exact_phase(freqs: Sequence[int], coords: Sequence[int]) -> float:
    return (sum(k * c for k, c in zip(freqs, coords)) & MASK) / ONE


def eval_torus_char(k: Sequence[int], x: GroupElement) -> complex:
    """exp(2 pi i k.x) on a reduced torus point."""
    x.require(ModelKind.TORUS)
    if len(k) != x.dimension:
        raise ModelMismatchError(f"Character of length {len(k)} on a {x.dimension}-torus")
    if all(v == 0 for v in k):
        return 1.0 + 0.0j
    return cmath.exp(1j * TWO_PI * _exact_phase(k, x.coords))


def eval_heis_horizontal(kx: int, ky: int, g: GroupElement) -> complex:
    """exp(2 pi i (kx x + ky y)); factors through the horizontal torus."""
    g.require(ModelKind.HEISENBERG)
    if kx == 0 and ky == 0:
        return 1.0 + 0.0j
    return cmath.exp(1j * TWO_PI * _exact_phase((kx, ky), g.coords[:2]))


def eval_heis_theta(truncation: int, g: GroupElement) -> complex:
    """sum_{|m|<=K} exp(-pi (y+m)^2) exp(2 pi i (z + m x)).

    Accepts unreduced elements: the series is invariant under right
    multiplication by Gamma apart from the truncated tail.
    """
    g.require(ModelKind.HEISENBERG)
    if truncation < 3:
        raise ArgumentRangeError(f"Theta truncation K must be >= 3, got {truncation}")
    x, y, z = g.coords
    terms = []
    for m in range(-truncation, truncation + 1):
        shifted = (y + m * ONE) / ONE
        phase = ((z + m * x) & MASK) / ONE
        terms.append(math.exp(-math.pi * shifted * shifted) * cmath.exp(1j * TWO_PI * phase))
    return complex(
        math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)
    )


def evaluate(obs: Observable, element: GroupElement) -> complex:
    _check_model(obs, element.kind, element.dimension)
    if obs.kind is ObservableKind.CONSTANT:
        return complex(obs.value)
    if obs.kind is ObservableKind.TORUS_CHARACTER:
        return eval_torus_char(obs.frequencies, element)
    if obs.kind is ObservableKind.HEIS_HORIZONTAL:
        return eval_heis_horizontal(obs.frequencies[0], obs.frequencies[1], element)
    return eval_heis_theta(obs.truncation, element)


def character_phases(coords: np.ndarray, freqs: Sequence[int]) -> np.ndarray:
    acc = np.zeros(coords.shape[0], dtype=np.uint64)
    for i, k in enumerate(freqs):
        if k:
            acc += np.uint64(k % _U64_MOD) * coords[:, i]
    return acc.astype(np.float64) / _TWO_64


def _batch_theta(coords: np.ndarray, truncation: int) -> np.ndarray:
    x, y, z = coords[:, 0], coords[:, 1], coords[:, 2]
    yf = y.astype(np.float64) / _TWO_64
    total = np.zeros(coords.shape[0], dtype=np.complex128)
    for m in range(-truncation, truncation + 1):
        phase = (z + np.uint64(m % _U64_MOD) * x).astype(np.float64) / _TWO_64
        total += np.exp(-np.pi * (yf + m) ** 2) * np.exp(1j * TWO_PI * phase)
    return total


def evaluate_batch(
    obs: Observable, coords: np.ndarray, kind: ModelKind
) -> np.ndarray:
    """Evaluate on reduced points given as top-64-bit uint64 coordinate rows."""
    _check_model(obs, kind, coords.shape[1])
    n = coords.shape[0]
    if obs.kind is ObservableKind.CONSTANT:
        return np.full(n, complex(obs.value), dtype=np.complex128)
    if obs.kind is ObservableKind.HEIS_THETA:
        return _batch_theta(coords, obs.truncation)
    if all(k == 0 for k in obs.frequencies):
        return np.ones(n, dtype=np.complex128)
    return np.exp(1j * TWO_PI * character_phases(coords, obs.frequencies))


def space_mean(obs: Observable, model: NilsystemModel, grid: int) -> complex:
    """Midpoint-rule integral over the fundamental cube (Haar = Lebesgue there)."""
    if grid < 16:
        raise ArgumentRangeError(f"Quadrature grid must be at least 16, got {grid}")
    _check_model(obs, model.kind, model.dimension)
    points = grid**model.dimension
    if points > MAX_QUADRATURE_POINTS:
        raise ResourceGuardError(f"{points} quadrature points exceed the guard")
    axis = np.array([((2 * j + 1) << 64) // (2 * grid) for j in range(grid)], dtype=np.uint64)
    mesh = np.meshgrid(*([axis] * model.dimension), indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=1)
    values = evaluate_batch(obs, coords, model.kind)
    return complex(
        math.fsum(values.real.tolist()) / points, math.fsum(values.imag.tolist()) / points
    )
