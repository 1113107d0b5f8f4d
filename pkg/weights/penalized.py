"""
Penalized potential V_alpha = U_alpha + d^2(., Omega) / (2 alpha).

The density e^{-V_alpha} on R^n replaces e^{-U} 1_Omega in the whole-space problems;
on Omega the penalty vanishes, outside it grows like 1/alpha.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from ..domains.base import ConvexDomain
from ..prox.moreau import EnvelopePotential
from ..prox.potential import ConstantPotential, ConvexPotential

logger = logging.getLogger(__name__)


class PenalizedPotential(ConvexPotential):
    """
    V_alpha with gradient grad U_alpha + m(x, Omega)/alpha.

    exact=True keeps U itself in place of the envelope U_alpha.
    """

    def __init__(self, base: ConvexPotential, domain: ConvexDomain, alpha: float, exact: bool = False):
        if not alpha > 0.0:
            raise ValueError(f"penalization level alpha must be positive, got {alpha}")
        self.base = base
        self.domain = domain
        self.alpha = float(alpha)
        self.exact = bool(exact)
        # constants are their own envelopes
        self.smooth = base if exact or isinstance(base, ConstantPotential) else EnvelopePotential(base, alpha)
        self.convexity_declared = base.convexity_declared
        mode = "exact" if exact else "envelope"
        self.name = f"penalized({base.name}, {domain.kind.value}, alpha={alpha:.6g}, {mode})"

    def penalty(self, x) -> float:
        return self.domain.distance_sq(x) / (2.0 * self.alpha)

    def value(self, x):
        return self.smooth.value(x) + self.penalty(x)

    def gradient(self, x):
        return self.smooth.gradient(x) + self.domain.project(x).offset / self.alpha

    @property
    def has_hessian(self):
        return False

    def value_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.smooth.value_batch(X) + self.domain.distance_sq_batch(X) / (2.0 * self.alpha)

    def gradient_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        _, offsets = self.domain.project_batch(X)
        return self.smooth.gradient_batch(X) + offsets / self.alpha

    def describe(self):
        return {"name": self.name, "alpha": self.alpha, "exact": self.exact,
                "base": self.base.describe(), "domain": self.domain.describe()}


def v_alpha_eval(p: PenalizedPotential, x) -> Tuple[float, np.ndarray]:
    """(V_alpha(x), grad V_alpha(x))."""
    return p.value(x), p.gradient(x)


def v_alpha_limit_series(base: ConvexPotential, domain: ConvexDomain, x,
                         alphas: Sequence[float], exact: bool = False) -> List[Tuple[float, float]]:
    """
    (alpha, V_alpha(x)) along a decreasing grid: tends to U(x) on Omega and
    diverges outside.
    """
    return [(float(a), PenalizedPotential(base, domain, a, exact).value(x)) for a in alphas]
