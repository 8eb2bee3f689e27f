from .domain_exceptions import (
    DomainError,
    ArgumentRangeError,
    ModelMismatchError,
    NonCoprimeResidueError,
    NegativeExponentError,
    ContractViolationError,
    ResourceGuardError,
    InvalidExperimentConfigError,
)

__all__ = [
    "DomainError",
    "ArgumentRangeError",
    "ModelMismatchError",
    "NonCoprimeResidueError",
    "NegativeExponentError",
    "ContractViolationError",
    "ResourceGuardError",
    "InvalidExperimentConfigError",
]
