from dataclasses import dataclass


@dataclass(frozen=True)
class ExactSplit:
    """Both sides of the W-reindexing identity, computed independently."""

    lhs: complex
    rhs_full: complex

    @property
    def relative_gap(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs_full))
        return 0.0 if scale == 0 else abs(self.lhs - self.rhs_full) / scale


@dataclass(frozen=True)
class CoprimeSplit:
    """Coprime-residue form of a prime-supported W-average.

    ``residual`` is lhs - main. The leftover terms are enumerated on their
    own: the primes dividing W (``small_prime_terms``) and the n=0 / n=N
    shifts of each residue class (``boundary_terms``), all divided by WN.
    They account for the residual only when b vanishes off the primes.
    """

    lhs: complex
    main: complex
    residual: complex
    small_prime_terms: complex
    boundary_terms: complex

    @property
    def identity_error(self) -> float:
        return abs(self.residual - self.small_prime_terms - self.boundary_terms)


@dataclass(frozen=True)
class AntiCorrelation:
    """Per-residue correlations of (Lambda'_{r,omega} - 1) with a nilsequence."""

    per_r: tuple[tuple[int, complex], ...]
    max_abs: float

    @property
    def worst_residue(self) -> int:
        return max(self.per_r, key=lambda item: abs(item[1]))[0]

    @property
    def worst_value(self) -> complex:
        return max(self.per_r, key=lambda item: abs(item[1]))[1]


@dataclass(frozen=True)
class Decomposition:
    """I(N) + II(N) + remainder for the W-strided Lambda'-weighted average."""

    I_N: complex
    II_N: complex
    remainder: complex
    lhs: complex

    @property
    def reconstruction_error(self) -> float:
        return abs(self.I_N + self.II_N + self.remainder - self.lhs)
