"""
Halfspaces {<a, x> <= c}.

Built from a measure sigma on [0, 1] the normal has coordinates
a_k = sqrt(lambda_k) * int e_k d sigma, i.e. G(f) = int f d sigma - c.
"""

import math
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.constants import HALF_LINE_POINTS, QuadratureKind, DomainKind, TENSOR_NODE_BUDGET
from ..core.errors import NodeBudgetError
from ..core.model import TruncatedModel
from ..core.quadrature import (
    QuadratureRule,
    SQRT_2PI,
    _tensor_grid,
    gauss_hermite_1d,
    halfspace_rule,
    householder_to,
)
from .base import ConvexDomain, ProjectionResult


class HalfspaceDomain(ConvexDomain):
    """G(x) = <a, x> - c; grad G = a; Hessian 0."""

    kind = DomainKind.HALFSPACE

    def __init__(self, a: Sequence[float], c: float = 0.0, name: str = "halfspace"):
        a = np.asarray(a, dtype=float).ravel()
        if not np.all(np.isfinite(a)) or np.linalg.norm(a) == 0.0:
            raise ValueError("halfspace normal must be a finite nonzero vector")
        self.a = a
        self.a.setflags(write=False)
        self.c = float(c)
        self.n = a.shape[0]
        self.name = name
        self._norm_sq = float(a @ a)

    @classmethod
    def from_measure(
        cls,
        model: TruncatedModel,
        sigma: Sequence[Tuple[float, float]],
        c: float = 0.0,
    ) -> "HalfspaceDomain":
        """Halfspace {int f d sigma <= c} for sigma given as (node, mass) pairs."""
        if not sigma:
            raise ValueError("sigma must contain at least one (node, mass) pair")
        nodes = np.array([float(xi) for xi, _ in sigma])
        masses = np.array([float(w) for _, w in sigma])
        a = masses @ model.scaled_basis_matrix(nodes)
        return cls(a, c, name="halfspace-sigma")

    @property
    def offset_along_normal(self) -> float:
        """Signed position s of the boundary along a/|a|."""
        return self.c / math.sqrt(self._norm_sq)

    def g_value(self, x):
        return float(self.a @ self._as_point(x) - self.c)

    def g_grad(self, x):
        self._as_point(x)
        return self.a.copy()

    def g_hess(self, x):
        self._as_point(x)
        return np.zeros((self.n, self.n))

    def g_value_batch(self, X):
        return np.atleast_2d(X) @ self.a - self.c

    def g_grad_batch(self, X):
        return np.tile(self.a, (np.atleast_2d(X).shape[0], 1))

    def project(self, x) -> ProjectionResult:
        """p = x - max(0, (<a,x> - c)/|a|^2) a."""
        x = self._as_point(x)
        excess = max(0.0, (self.a @ x - self.c) / self._norm_sq)
        offset = excess * self.a
        return ProjectionResult(x - offset, offset, float(excess * math.sqrt(self._norm_sq)))

    def project_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        excess = np.maximum(0.0, (X @ self.a - self.c) / self._norm_sq)
        offsets = excess[:, None] * self.a[None, :]
        return X - offsets, offsets

    def volume_rule(self, model, resolution, samples=None, stream=0,
                    normal_points: int = HALF_LINE_POINTS) -> QuadratureRule:
        """Rotated rule: half-line rule along a/|a|, Gauss-Hermite on tangential axes."""
        return halfspace_rule(self.a, self.c, normal_points=normal_points,
                              tangential_points=resolution)

    def split_rule(self, resolution: int, normal_points: int = HALF_LINE_POINTS) -> QuadratureRule:
        """
        Whole-space rule made of the rules for Omega and for its closed complement;
        integrands with a kink on the boundary stay smooth on each piece.
        """
        inside = halfspace_rule(self.a, self.c, normal_points, resolution)
        outside = halfspace_rule(-self.a, -self.c, normal_points, resolution)
        return QuadratureRule(
            QuadratureKind.HALFSPACE_GAUSS,
            np.concatenate([inside.nodes, outside.nodes]),
            np.concatenate([inside.weights, outside.weights]),
            f"split halfspace s={self.offset_along_normal:.6g} normal={normal_points} tangential={resolution}",
        )

    def boundary_rule(self, resolution: int, rng: Optional[np.random.Generator] = None,
                      node_budget: int = TENSOR_NODE_BUDGET) -> QuadratureRule:
        """
        Gaussian surface measure on {<a, x> = c}: the density (2 pi)^{-n/2} e^{-|x|^2/2}
        factors into phi(s) times a standard Gaussian rule on the tangential hyperplane.
        """
        s = self.offset_along_normal
        total = resolution ** (self.n - 1)
        if total > node_budget:
            raise NodeBudgetError(total, node_budget)
        xg, wg = gauss_hermite_1d(resolution)
        tang_nodes, tang_weights = _tensor_grid(xg, wg, self.n - 1)
        y = np.concatenate([np.full((tang_nodes.shape[0], 1), s), tang_nodes], axis=1)
        nodes = y @ householder_to(self.a).T
        density = math.exp(-0.5 * s * s) / SQRT_2PI
        return QuadratureRule(
            QuadratureKind.SURFACE,
            nodes,
            density * tang_weights,
            f"hyperplane s={s:.6g} tangential={resolution}",
        )

    def describe(self):
        return {"kind": self.kind.value, "n": self.n, "a": self.a.tolist(), "c": self.c}
