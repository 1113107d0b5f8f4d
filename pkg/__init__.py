"""
Weighted Gaussian Laboratory

Galerkin solver and executable checks for elliptic problems
    lambda u - L u = f
on convex domains of a truncated Wiener space with a convex log-density weight.

Commands:
- solve: Hermite-Galerkin solve with regularity report
- penalize-sweep: penalized whole-space solves converging to the domain solve
- prox-check / project-check: Moreau-Yosida and projection property suites
- neumann-check / ibp-check: boundary statements on the traces
- identities: closed-form sums of the covariance spectrum
"""

__version__ = "1.0.0"
__author__ = "Weighted Gaussian Laboratory"

from .core import LabError, RunConfig, TruncatedModel
from .cli import run

__all__ = [
    "LabError",
    "RunConfig",
    "TruncatedModel",
    "run",
]
