"""Deterministic summation: exact per-block sums, compensated ordered combination.

Index ranges are cut on a fixed global grid of BLOCK_SIZE, each block is
summed with math.fsum (correctly rounded, so independent of term order), and
block sums are folded in ascending block order with Neumaier compensation.
Results are therefore bit-identical for any number of workers.
"""

import math
from dataclasses import dataclass

import numpy as np

BLOCK_SIZE = 1 << 16


def block_ranges(lo: int, hi: int, block_size: int = BLOCK_SIZE) -> list[tuple[int, int]]:
    """Split the index interval (lo, hi] at multiples of block_size."""
    ranges = []
    start = lo
    while start < hi:
        stop = min((start // block_size + 1) * block_size, hi)
        ranges.append((start, stop))
        start = stop
    return ranges


def exact_sum(values: np.ndarray) -> complex:
    """Correctly rounded sum of a complex array (real and imaginary parts)."""
    if values.size == 0:
        return 0j
    return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))


def _neumaier_step(total: float, comp: float, term: float) -> tuple[float, float]:
    t = total + term
    if abs(total) >= abs(term):
        comp += (total - t) + term
    else:
        comp += (term - t) + total
    return t, comp


@dataclass
class CompensatedSum:
    """Running complex sum with Neumaier compensation on both parts."""

    _re: float = 0.0
    _im: float = 0.0
    _re_comp: float = 0.0
    _im_comp: float = 0.0
    terms: int = 0

    def add(self, value: complex) -> None:
        self._re, self._re_comp = _neumaier_step(self._re, self._re_comp, value.real)
        self._im, self._im_comp = _neumaier_step(self._im, self._im_comp, value.imag)
        self.terms += 1

    @property
    def value(self) -> complex:
        return complex(self._re + self._re_comp, self._im + self._im_comp)
