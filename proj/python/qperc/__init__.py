"""Percolation of quantum communication clusters on a chain."""

from ._core import *  # noqa: F401,F403
from ._core import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    EnumerationLimitError,
    EstimationError,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
