"""
Strong form of the weighted Ornstein-Uhlenbeck operator

    L psi = trace(Hess psi) - <x + grad V, grad psi>

and the L^2 residual of a Galerkin solution against it.
"""

import math
from typing import Optional, Union

import numpy as np

from ..core.model import TruncatedModel
from ..core.quadrature import QuadratureRule
from ..prox.potential import ConvexPotential
from .density import WeightDensity
from .rhs import as_forcing

Weight = Union[ConvexPotential, WeightDensity, None]


def _drift(weight: Weight, X: np.ndarray) -> np.ndarray:
    if weight is None:
        return np.zeros_like(X)
    if isinstance(weight, WeightDensity):
        return weight.drift(X)
    return weight.gradient_batch(X)


def _derivatives(psi, X: np.ndarray):
    if hasattr(psi, "gradient_batch") and hasattr(psi, "hessian_batch"):
        return psi.gradient_batch(X), psi.hessian_batch(X)
    grads = np.array([psi.gradient(x) for x in X]).reshape(X.shape)
    hessians = np.array([psi.hessian(x) for x in X]).reshape(X.shape + (X.shape[1],))
    return grads, hessians


def apply_operator_batch(weight: Weight, psi, X: np.ndarray) -> np.ndarray:
    """L psi at the rows of X; psi supplies gradients and Hessians."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    grad, hess = _derivatives(psi, X)
    trace = np.trace(hess, axis1=1, axis2=2)
    return trace - np.einsum("na,na->n", X + _drift(weight, X), grad)


def apply_operator(model: Optional[TruncatedModel], weight: Weight, psi, x) -> float:
    """L psi (x) for the weight U (or V_alpha, or a density)."""
    x = np.asarray(x, dtype=float).ravel()
    if model is not None and x.shape[0] != model.n:
        raise ValueError(f"point has dimension {x.shape[0]}, model has n={model.n}")
    return float(apply_operator_batch(weight, psi, x[None, :])[0])


def strong_residual(sol, density: Optional[WeightDensity] = None, f=None,
                    rule: Optional[QuadratureRule] = None) -> float:
    """
    || lambda u - L u - f ||_{L^2(w gamma)} on the rule.

    Defaults come from the solved system: its density, forcing term and assembly rule.
    """
    system = sol.system
    density = density or system.density
    forcing = as_forcing(f) if f is not None else system.forcing
    rule = rule or system.rule
    expansion = sol.expansion
    nodes = rule.nodes
    weights = rule.weights * density.values(nodes)
    keep = weights > 0.0
    if not keep.any():
        return 0.0
    nodes, weights = nodes[keep], weights[keep]
    residual = (sol.lam * expansion.value_batch(nodes)
                - apply_operator_batch(density, expansion, nodes)
                - forcing(nodes))
    return math.sqrt(max(float(weights @ residual ** 2), 0.0))
