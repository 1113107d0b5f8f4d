"""
Convex domains - defining functions, H-projection, distance and integration rules.
"""

from .base import ConvexDomain, ProjectionResult, WholeSpaceDomain
from .ellipsoid import EllipsoidDomain
from .factory import NondegeneracyReport, build_domain, nondegeneracy_report
from .halfspace import HalfspaceDomain

__all__ = [
    "ConvexDomain",
    "WholeSpaceDomain",
    "HalfspaceDomain",
    "EllipsoidDomain",
    "ProjectionResult",
    "NondegeneracyReport",
    "build_domain",
    "nondegeneracy_report",
]
