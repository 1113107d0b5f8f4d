"""
Scalar building blocks of the example weights.

Phi: convex R -> R (for U1).  Psi: R x [0, 1] -> R, convex in the first slot (for U2).
Each carries a default growth certificate |d/ds| <= C e^{beta |s|}.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np
from scipy.special import expit


@dataclass(frozen=True)
class ScalarFunction:
    """Convex Phi with first and second derivative."""
    name: str
    value: Callable[[np.ndarray], np.ndarray]
    d1: Callable[[np.ndarray], np.ndarray]
    d2: Optional[Callable[[np.ndarray], np.ndarray]] = None
    growth_c: float = 1.0
    growth_beta: float = 1.0


@dataclass(frozen=True)
class PathIntegrand:
    """Psi(s, xi) with partial derivatives in s; d2 optional."""
    name: str
    value: Callable[[np.ndarray, np.ndarray], np.ndarray]
    d1: Callable[[np.ndarray, np.ndarray], np.ndarray]
    d2: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    growth_c: float = 1.0
    growth_beta: float = 1.0


def _softplus_d2(s):
    p = expit(s)
    return p * (1.0 - p)


PHI_FUNCTIONS: Dict[str, ScalarFunction] = {
    "cosh": ScalarFunction("cosh", np.cosh, np.sinh, np.cosh, 1.0, 1.0),
    "square": ScalarFunction("square", np.square, lambda s: 2.0 * s,
                             lambda s: np.full(np.shape(s), 2.0), 2.0, 1.0),
    "softplus": ScalarFunction("softplus", lambda s: np.logaddexp(0.0, s), expit,
                               _softplus_d2, 1.0, 1.0),
}

PSI_FUNCTIONS: Dict[str, PathIntegrand] = {
    "square": PathIntegrand("square", lambda s, xi: np.square(s), lambda s, xi: 2.0 * s,
                            lambda s, xi: np.full(np.shape(s), 2.0), 2.0, 1.0),
    "cosh": PathIntegrand("cosh", lambda s, xi: np.cosh(s), lambda s, xi: np.sinh(s),
                          lambda s, xi: np.cosh(s), 1.0, 1.0),
}


def get_phi(name: str) -> ScalarFunction:
    if name not in PHI_FUNCTIONS:
        raise ValueError(f"unknown phi '{name}', expected one of {sorted(PHI_FUNCTIONS)}")
    return PHI_FUNCTIONS[name]


def get_psi(name: str) -> PathIntegrand:
    if name not in PSI_FUNCTIONS:
        raise ValueError(f"unknown psi '{name}', expected one of {sorted(PSI_FUNCTIONS)}")
    return PSI_FUNCTIONS[name]
