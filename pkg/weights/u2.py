"""
U2(f) = int_0^1 Psi(f(xi), xi) dxi, evaluated with a Gauss-Legendre rule in xi.
"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..core.constants import DEFAULT_XI_NODES
from ..core.model import TruncatedModel
from ..prox.potential import ConvexPotential
from .scalar import PathIntegrand, get_psi


class WeightU2(ConvexPotential):
    """
    Sum_j omega_j Psi((E x)_j, xi_j) with E[j, k] = sqrt(lambda_k) e_k(xi_j).

    Gradient E^T (omega * Psi_s); Hessian E^T diag(omega * Psi_ss) E when Psi_ss is known.
    """

    name = "u2"

    def __init__(
        self,
        model: TruncatedModel,
        psi: Union[str, PathIntegrand] = "square",
        xi_nodes: int = DEFAULT_XI_NODES,
        growth_c: Optional[Union[float, Sequence[float]]] = None,
        growth_beta: Optional[float] = None,
    ):
        self.psi = get_psi(psi) if isinstance(psi, str) else psi
        self.xi, self.omega = model.path_quadrature(int(xi_nodes))
        self.embedding = model.scaled_basis_matrix(self.xi)
        self.eigenvalues = model.eigenvalues
        c = self.psi.growth_c if growth_c is None else growth_c
        self.growth_c = np.broadcast_to(np.asarray(c, dtype=float), self.xi.shape).copy()
        if np.any(self.growth_c < 0.0):
            raise ValueError("growth function C must be nonnegative")
        self.growth_beta = float(self.psi.growth_beta if growth_beta is None else growth_beta)
        self.convexity_declared = True
        self.name = f"u2-{self.psi.name}"

    @property
    def growth_c_l2(self) -> float:
        """||C||_{L^2([0,1])} against the xi rule."""
        return float(np.sqrt(self.omega @ self.growth_c ** 2))

    def path_values(self, x) -> np.ndarray:
        return self.embedding @ np.asarray(x, dtype=float)

    def value(self, x):
        return float(self.omega @ self.psi.value(self.path_values(x), self.xi))

    def gradient(self, x):
        return self.embedding.T @ (self.omega * self.psi.d1(self.path_values(x), self.xi))

    @property
    def has_hessian(self):
        return self.psi.d2 is not None

    def hessian(self, x):
        curvature = self.omega * self.psi.d2(self.path_values(x), self.xi)
        return self.embedding.T @ (curvature[:, None] * self.embedding)

    def value_batch(self, X):
        F = np.atleast_2d(X) @ self.embedding.T
        return self.psi.value(F, self.xi[None, :]) @ self.omega

    def gradient_batch(self, X):
        F = np.atleast_2d(X) @ self.embedding.T
        return (self.psi.d1(F, self.xi[None, :]) * self.omega[None, :]) @ self.embedding

    def describe(self):
        return {"name": self.name, "xi_nodes": int(self.xi.size),
                "growth_beta": self.growth_beta, "growth_c_l2": self.growth_c_l2}


def u2_eval(w: WeightU2, x) -> Tuple[float, np.ndarray]:
    """(U2(x), grad U2(x))."""
    return w.value(x), w.gradient(x)
