# Domain Layer - Core objects of the prime-averaging laboratory
from .prime_table import PrimeTable
from .poly_sequence import PolySequence
from .nilsystem_model import NilsystemModel
from .observable import Observable, ObservableKind
from .average_series import AverageSeries
from .averaging_results import AntiCorrelation, CoprimeSplit, Decomposition, ExactSplit

__all__ = [
    "PrimeTable",
    "PolySequence",
    "NilsystemModel",
    "Observable",
    "ObservableKind",
    "AverageSeries",
    "AntiCorrelation",
    "CoprimeSplit",
    "Decomposition",
    "ExactSplit",
]
