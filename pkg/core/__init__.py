"""
Core module - Constants, errors, run configuration, truncated model and quadrature.
"""

from .constants import *
from .config import RunConfig
from .errors import (
    AssemblyConsistencyError,
    CapabilityError,
    ConditioningError,
    ConfigValidationError,
    ContractViolation,
    GrowthCertificateError,
    IndexRangeError,
    LabError,
    MeasureMismatchError,
    NodeBudgetError,
    NonFiniteValueError,
    ProjectionConvergenceError,
    ProxConvergenceError,
)
from .model import TruncatedModel
from .quadrature import QuadratureRule, build_quadrature

__all__ = [
    "RunConfig",
    "TruncatedModel",
    "QuadratureRule",
    "build_quadrature",
    "LabError",
    "IndexRangeError",
    "NodeBudgetError",
    "ConfigValidationError",
    "ProjectionConvergenceError",
    "ProxConvergenceError",
    "NonFiniteValueError",
    "AssemblyConsistencyError",
    "ConditioningError",
    "CapabilityError",
    "GrowthCertificateError",
    "ContractViolation",
    "MeasureMismatchError",
]
