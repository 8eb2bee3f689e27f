class DomainError(Exception):
    """Base exception for all domain-level errors."""

    pass


class ArgumentRangeError(DomainError, ValueError):
    """Raised when an argument lies outside the range an operation accepts."""

    pass


class ModelMismatchError(DomainError):
    """Raised when group elements or observables belong to different models."""

    pass


class NonCoprimeResidueError(DomainError):
    """Raised when a residue is not coprime to the primorial W."""

    pass


class NegativeExponentError(DomainError):
    """Raised when a polynomial exponent evaluates to a negative integer."""

    pass


class ContractViolationError(DomainError):
    """Raised when a sequence breaks its supported-on-primes contract."""

    pass


class ResourceGuardError(DomainError):
    """Raised when a computation would exceed the configured resource guard."""

    pass


class InvalidExperimentConfigError(DomainError):
    """Raised when an experiment description fails validation."""

    pass
