"""Stein-method error bounds and numerical checks for g(W) approximating g(Z)."""

from .combinatorics import DerivNormProfile, h_n, stirling2
from .distributions import DistributionSpec, get_distribution, std_normal_abs_moment
from .errors import (AccuracyError, ConfigError, DimensionError, DomainError, HypothesisError,
                     InsufficientSignalError, RangeError, SteinError)
from .gfunctions import GFunction, get_gfunction
from .sampling import MCEstimate
from .testfunctions import TestFunction, get_testfunction

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "ConfigError", "DerivNormProfile", "DimensionError", "DistributionSpec",
    "DomainError", "GFunction", "HypothesisError", "InsufficientSignalError", "MCEstimate",
    "RangeError", "SteinError", "TestFunction", "get_distribution", "get_gfunction",
    "get_testfunction", "h_n", "std_normal_abs_moment", "stirling2",
]
