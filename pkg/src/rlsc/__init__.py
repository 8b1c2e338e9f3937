"""Compiler from regular-language descriptions to state-preparation circuits."""

from .automaton import BINARY, DagDfa, Dfa
from .errors import (
    EmptyLanguageError,
    InputError,
    NumericalDegeneracyWarning,
    ResourceLimitError,
    RlscError,
    VerificationError,
)
from .pipeline import CompileConfig, CompileResult, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "BINARY",
    "CompileConfig",
    "CompileResult",
    "DagDfa",
    "Dfa",
    "EmptyLanguageError",
    "InputError",
    "NumericalDegeneracyWarning",
    "ResourceLimitError",
    "RlscError",
    "VerificationError",
    "run_pipeline",
]
