from .averaging_service import AveragingService, dyadic_checkpoints, kronecker_rotation
from .kernels import (
    AveragingKernel,
    BirkhoffKernel,
    IndexedSequence,
    LambdaAverageKernel,
    PrimeAverageKernel,
    RawCorrelationKernel,
    ResidueKernel,
    ResidueMode,
    WStridedKernel,
    lambda_observable_sequence,
    lambda_sequence,
)

__all__ = [
    "AveragingKernel",
    "AveragingService",
    "BirkhoffKernel",
    "IndexedSequence",
    "LambdaAverageKernel",
    "PrimeAverageKernel",
    "RawCorrelationKernel",
    "ResidueKernel",
    "ResidueMode",
    "WStridedKernel",
    "dyadic_checkpoints",
    "kronecker_rotation",
    "lambda_observable_sequence",
    "lambda_sequence",
]
