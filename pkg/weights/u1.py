"""
U1(f) = Phi(int_0^1 f d tau).

With tau given as (node, mass) pairs the inner integral is the linear functional
<t, x> with t_k = sqrt(lambda_k) sum_j w_j e_k(xi_j).
"""

import logging
import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..core.model import TruncatedModel, gauss_legendre_unit
from ..prox.potential import ConvexPotential
from .scalar import ScalarFunction, get_phi

logger = logging.getLogger(__name__)

Measure = Sequence[Tuple[float, float]]


def uniform_tau(q: int) -> Measure:
    """Lebesgue measure on [0, 1] discretised by q-point Gauss-Legendre."""
    xi, w = gauss_legendre_unit(q)
    return list(zip(xi.tolist(), w.tolist()))


class WeightU1(ConvexPotential):
    """Phi(<t, x>) with gradient Phi'(<t,x>) t and Hessian Phi''(<t,x>) t t^T."""

    name = "u1"

    def __init__(
        self,
        model: TruncatedModel,
        phi: Union[str, ScalarFunction] = "cosh",
        tau: Optional[Measure] = None,
        growth: Optional[Tuple[float, float]] = None,
    ):
        self.phi = get_phi(phi) if isinstance(phi, str) else phi
        tau = list(tau) if tau is not None else [(1.0, 1.0)]
        if not tau:
            raise ValueError("tau must contain at least one (node, mass) pair")
        nodes = np.array([float(xi) for xi, _ in tau])
        masses = np.array([float(w) for _, w in tau])
        if np.any(masses < 0.0):
            raise ValueError("tau masses must be nonnegative")
        self.tau_nodes = nodes
        self.tau_masses = masses
        self.t_coeffs = masses @ model.scaled_basis_matrix(nodes)
        self.t_coeffs.setflags(write=False)
        self.growth = growth if growth is not None else (self.phi.growth_c, self.phi.growth_beta)
        self.convexity_declared = True
        self.name = f"u1-{self.phi.name}"

    @property
    def tau_mass(self) -> float:
        return float(self.tau_masses.sum())

    def value(self, x):
        return float(self.phi.value(self.t_coeffs @ np.asarray(x, dtype=float)))

    def gradient(self, x):
        return float(self.phi.d1(self.t_coeffs @ np.asarray(x, dtype=float))) * self.t_coeffs

    @property
    def has_hessian(self):
        return self.phi.d2 is not None

    def hessian(self, x):
        s = self.t_coeffs @ np.asarray(x, dtype=float)
        return float(self.phi.d2(s)) * np.outer(self.t_coeffs, self.t_coeffs)

    def value_batch(self, X):
        return self.phi.value(np.atleast_2d(X) @ self.t_coeffs)

    def gradient_batch(self, X):
        s = np.atleast_2d(X) @ self.t_coeffs
        return self.phi.d1(s)[:, None] * self.t_coeffs[None, :]

    def closed_form_prox(self, x, alpha):
        """
        The minimizer lies on the line -c t with c = alpha Phi'(s - c |t|^2), s = <t, x>;
        the scalar equation is monotone and bracketed by 0 and alpha Phi'(s).
        """
        if self.phi.d2 is None:
            return None
        s = float(self.t_coeffs @ np.asarray(x, dtype=float))
        tt = float(self.t_coeffs @ self.t_coeffs)
        target = alpha * float(self.phi.d1(s))
        lo, hi = min(0.0, target), max(0.0, target)
        c = 0.5 * (lo + hi)
        for _ in range(200):
            resid = c - alpha * float(self.phi.d1(s - c * tt))
            if abs(resid) <= 4.0 * np.finfo(float).eps * max(1.0, abs(c)):
                break
            if resid > 0.0:
                hi = c
            else:
                lo = c
            slope = 1.0 + alpha * tt * float(self.phi.d2(s - c * tt))
            step = c - resid / slope
            c = step if lo < step < hi else 0.5 * (lo + hi)
            if hi - lo <= 4.0 * np.finfo(float).eps * max(1.0, abs(c)):
                break
        if not math.isfinite(c):
            return None
        return -c * self.t_coeffs

    def describe(self):
        return {"name": self.name, "tau": [[float(a), float(b)] for a, b in zip(self.tau_nodes, self.tau_masses)],
                "growth": list(self.growth)}


def u1_eval(w: WeightU1, x) -> Tuple[float, np.ndarray]:
    """(U1(x), grad U1(x))."""
    return w.value(x), w.gradient(x)
