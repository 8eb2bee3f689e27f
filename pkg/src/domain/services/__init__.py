# Pure computations over domain objects
from . import nilsystem, observables, primes, summation

__all__ = ["nilsystem", "observables", "primes", "summation"]
