"""Exact group arithmetic on the torus and Heisenberg nilmanifolds.

Conventions: Heisenberg elements use upper-triangular Mal'cev coordinates with
the law (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x*y') and Gamma = Z^3. Every
coordinate is a Python integer numerator over 2**128, so integer parts are
unbounded and only the x*y' products round (downward, by less than 2**-128).
The fundamental domain is the half-open cube [0, 1)^d.
"""

from enum import Enum
from math import isqrt
from typing import Iterable, Sequence

import numpy as np

from ..entities.nilsystem_model import NilsystemModel
from ..entities.poly_sequence import PolySequence
from ..exceptions.domain_exceptions import (
    ArgumentRangeError,
    ModelMismatchError,
    NegativeExponentError,
)
from ..value_objects.group_element import GroupElement, ModelKind
from ..value_objects.unit_frac import FRAC_BITS, MASK, UnitFrac

HEIS = ModelKind.HEISENBERG
TORUS = ModelKind.TORUS

Coords = tuple[int, ...]


class IrrationalName(str, Enum):
    SQRT2M1 = "sqrt2m1"
    SQRT3M1 = "sqrt3m1"
    GOLDEN = "golden"


# tuple-level kernels shared by the public API and the batch sampler


def _heis_mul_t(a: Coords, b: Coords) -> Coords:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + ((a[0] * b[1]) >> FRAC_BITS))


def _heis_pow_t(g: Coords, k: int) -> Coords:
    a, b, c = g
    pairs = k * (k - 1) // 2
    return (k * a, k * b, k * c + ((pairs * a * b) >> FRAC_BITS))


def _heis_reduce_t(g: Coords) -> Coords:
    x, y, z = g
    floor_y = y >> FRAC_BITS
    # right-multiply by (-floor x, -floor y, r); x * (-floor y) is exact
    return (x & MASK, y & MASK, (z - x * floor_y) & MASK)


def _torus_add_t(a: Coords, b: Coords) -> Coords:
    return tuple((u + v) & MASK for u, v in zip(a, b))


def _torus_pow_t(alpha: Coords, k: int) -> Coords:
    return tuple((k * v) & MASK for v in alpha)


def _check_same_model(a: GroupElement, b: GroupElement) -> None:
    if a.kind is not b.kind or a.dimension != b.dimension:
        raise ModelMismatchError(
            f"Cannot combine {a.kind.value}^{a.dimension} with {b.kind.value}^{b.dimension}"
        )


def heis_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    a.require(HEIS)
    b.require(HEIS)
    return GroupElement(HEIS, _heis_mul_t(a.coords, b.coords))


def heis_pow(g: GroupElement, k: int) -> GroupElement:
    """g^k = (k a, k b, k c + C(k,2) a b) for g = (a, b, c)."""
    g.require(HEIS)
    if k < 0:
        raise ArgumentRangeError(f"Negative powers are not supported, got k={k}")
    return GroupElement(HEIS, _heis_pow_t(g.coords, k))


def reduce(g: GroupElement) -> GroupElement:
    """Canonical representative of the coset g*Gamma in [0, 1)^d."""
    if g.kind is TORUS:
        return g
    return GroupElement(HEIS, _heis_reduce_t(g.coords))


def torus_pow(alpha: Sequence[UnitFrac], k: int) -> GroupElement:
    if k < 0:
        raise ArgumentRangeError(f"Negative powers are not supported, got k={k}")
    return GroupElement(TORUS, _torus_pow_t(tuple(a.value for a in alpha), k))


def mul(a: GroupElement, b: GroupElement) -> GroupElement:
    _check_same_model(a, b)
    if a.kind is HEIS:
        return GroupElement(HEIS, _heis_mul_t(a.coords, b.coords))
    return GroupElement(TORUS, _torus_add_t(a.coords, b.coords))


def power(g: GroupElement, k: int) -> GroupElement:
    if g.kind is HEIS:
        return heis_pow(g, k)
    return torus_pow(g.unit_fracs(), k)


def polyseq_element(seq: PolySequence, n: int) -> GroupElement:
    """The unreduced product g_1^{p_1(n)} ... g_m^{p_m(n)} in G."""
    acc = GroupElement.identity(seq.kind, seq.dimension)
    for g, e in zip(seq.generators, _exponents_at(seq, n)):
        acc = mul(acc, power(g, e))
    return acc


def polyseq_eval(seq: PolySequence, n: int) -> GroupElement:
    """g(n) reduced modulo Gamma, i.e. the orbit of the identity coset."""
    return reduce(polyseq_element(seq, n))


def orbit_point(seq: PolySequence, n: int, x: GroupElement) -> GroupElement:
    """reduce(g(n) * x), the point F is evaluated at."""
    _check_same_model(seq.generators[0], x)
    return reduce(mul(polyseq_element(seq, n), x))


def _exponents_at(seq: PolySequence, n: int) -> tuple[int, ...]:
    if n < 0:
        raise ArgumentRangeError(f"Polynomial sequences are evaluated at n >= 0, got {n}")
    exps = seq.exponent_values(n)
    if any(e < 0 for e in exps):
        raise NegativeExponentError(f"Exponent values {exps} at n={n} include a negative")
    return exps


def _polyseq_t(seq: PolySequence, n: int) -> Coords:
    exps = _exponents_at(seq, n)
    gens = [g.coords for g in seq.generators]
    if seq.kind is HEIS:
        acc: Coords = (0, 0, 0)
        for g, e in zip(gens, exps):
            acc = _heis_mul_t(acc, _heis_pow_t(g, e))
        return acc
    acc = (0,) * seq.dimension
    for g, e in zip(gens, exps):
        acc = _torus_add_t(acc, _torus_pow_t(g, e))
    return acc


def orbit_hi64(seq: PolySequence, x: GroupElement, indices: Iterable[int]) -> np.ndarray:
    """Top 64 bits of every coordinate of reduce(g(n) x), one row per index.

    This is the batch path behind all averages: exact 128-bit arithmetic per
    index, truncated to uint64 only for observable evaluation.
    """
    _check_same_model(seq.generators[0], x)
    xc = x.coords
    rows: list[int] = []
    if seq.kind is HEIS:
        for n in indices:
            px, py, pz = _heis_reduce_t(_heis_mul_t(_polyseq_t(seq, int(n)), xc))
            rows.extend((px >> 64, py >> 64, pz >> 64))
    else:
        for n in indices:
            point = _torus_add_t(_polyseq_t(seq, int(n)), xc)
            rows.extend(v >> 64 for v in point)
    return np.array(rows, dtype=np.uint64).reshape(-1, seq.dimension)


def linear_orbit_hi64(g: GroupElement, x: GroupElement, ks: Iterable[int]) -> np.ndarray:
    """orbit_hi64 for the linear sequence g^k, skipping polynomial bookkeeping."""
    _check_same_model(g, x)
    gc, xc = g.coords, x.coords
    rows: list[int] = []
    if g.kind is HEIS:
        for k in ks:
            k = int(k)
            if k < 0:
                raise ArgumentRangeError(f"Negative powers are not supported, got k={k}")
            px, py, pz = _heis_reduce_t(_heis_mul_t(_heis_pow_t(gc, k), xc))
            rows.extend((px >> 64, py >> 64, pz >> 64))
    else:
        for k in ks:
            k = int(k)
            if k < 0:
                raise ArgumentRangeError(f"Negative powers are not supported, got k={k}")
            rows.extend(((k * a + b) & MASK) >> 64 for a, b in zip(gc, xc))
    return np.array(rows, dtype=np.uint64).reshape(-1, g.dimension)


def _rounded_sqrt_minus(n: int, minus: int, halve: bool) -> UnitFrac:
    guard = 64
    scale = FRAC_BITS + guard
    root = isqrt(n << (2 * scale))
    value = root - (minus << scale)
    shift = guard + (1 if halve else 0)
    return UnitFrac((value + (1 << (shift - 1))) >> shift)


def irrational_const(name: IrrationalName | str) -> UnitFrac:
    """sqrt(2)-1, sqrt(3)-1 or (sqrt(5)-1)/2 rounded to 128 fractional bits."""
    name = IrrationalName(name)
    if name is IrrationalName.SQRT2M1:
        return _rounded_sqrt_minus(2, 1, halve=False)
    if name is IrrationalName.SQRT3M1:
        return _rounded_sqrt_minus(3, 1, halve=False)
    return _rounded_sqrt_minus(5, 1, halve=True)


def horizontal_projection(g: GroupElement) -> GroupElement:
    """Image of a Heisenberg element in the horizontal torus G/[G,G]Gamma."""
    g.require(HEIS)
    return GroupElement(TORUS, (g.coords[0] & MASK, g.coords[1] & MASK))


def random_element(model: NilsystemModel, rng: np.random.Generator) -> GroupElement:
    """Uniform point of the fundamental domain with full 128-bit coordinates."""
    words = rng.integers(0, 2**64, size=2 * model.dimension, dtype=np.uint64).tolist()
    coords = tuple(
        (int(words[2 * i]) << 64) | int(words[2 * i + 1]) for i in range(model.dimension)
    )
    return GroupElement(model.kind, coords)
