"""
Weight densities of the Galerkin problems and the rules they are integrated with.

    whole-space            e^{-U}            on R^n
    whole-space-penalized  e^{-V_alpha}      on R^n
    domain-direct          e^{-U} 1_Omega
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..core.constants import (
    DEFAULT_MC_SAMPLES,
    MEMBERSHIP_TOL,
    TENSOR_NODE_BUDGET,
    DomainKind,
    QuadratureKind,
    SolverMode,
)
from ..core.errors import CapabilityError
from ..core.model import TruncatedModel
from ..core.quadrature import QuadratureRule, build_quadrature, gauss_hermite_1d, masked_monte_carlo_rule
from ..domains.base import ConvexDomain
from ..prox.potential import ConvexPotential
from ..weights.penalized import PenalizedPotential

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightDensity:
    """
    Unnormalised density w = e^{-V} (times 1_Omega for domain-direct problems).

    `potential` is V: U itself, or the penalized V_alpha; `base` is always U.
    """
    mode: SolverMode
    potential: ConvexPotential
    base: ConvexPotential
    domain: Optional[ConvexDomain] = None
    alpha: Optional[float] = None

    def indicator(self, X: np.ndarray) -> np.ndarray:
        if self.mode != SolverMode.DOMAIN_DIRECT or self.domain is None:
            return np.ones(np.atleast_2d(X).shape[0], dtype=bool)
        return self.domain.contains_batch(X, tol=MEMBERSHIP_TOL)

    def values(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        mask = self.indicator(X)
        out = np.zeros(X.shape[0])
        if mask.any():
            out[mask] = np.exp(-self.potential.value_batch(X[mask]))
        return out

    def drift(self, X: np.ndarray) -> np.ndarray:
        """grad V at the rows of X."""
        return self.potential.gradient_batch(np.atleast_2d(X))

    def describe(self) -> Dict[str, Any]:
        return {
            "mode": self.mode.value,
            "potential": self.potential.name,
            "domain": self.domain.describe() if self.domain is not None else None,
            "alpha": self.alpha,
        }


def build_density(
    mode,
    potential: ConvexPotential,
    domain: Optional[ConvexDomain] = None,
    alpha: Optional[float] = None,
    exact: bool = False,
) -> WeightDensity:
    """Density for a solver mode; penalized mode wraps U into V_alpha."""
    mode = SolverMode(mode)
    if mode == SolverMode.WHOLE_SPACE:
        return WeightDensity(mode, potential, potential)
    if domain is None:
        raise ValueError(f"solver mode '{mode.value}' needs a domain")
    if mode == SolverMode.WHOLE_SPACE_PENALIZED:
        if alpha is None or not alpha > 0.0:
            raise ValueError("penalized mode needs alpha > 0")
        penalized = PenalizedPotential(potential, domain, alpha, exact)
        return WeightDensity(mode, penalized, potential, domain, float(alpha))
    return WeightDensity(mode, potential, potential, domain)


def build_rule(
    model: TruncatedModel,
    density: WeightDensity,
    quadrature: Dict[str, Any],
    mc_samples: int = DEFAULT_MC_SAMPLES,
    node_budget: int = TENSOR_NODE_BUDGET,
    stream: int = 0,
) -> QuadratureRule:
    """
    Integration rule matching the density. Monte Carlo kinds draw `resolution` samples;
    `mc_samples` sizes the masked rules domains fall back to.

    Domain-direct problems use the domain's own volume rule (rotated half-line rule for
    halfspaces, polar rule for low-dimensional ellipsoids, masked Monte Carlo otherwise);
    penalized problems use the domain's split rule when it has one, so the kink of d^2
    sits on a rule boundary.
    """
    kind = QuadratureKind(quadrature.get("kind", QuadratureKind.TENSOR_GAUSS_HERMITE.value))
    resolution = int(quadrature.get("resolution", 16))
    domain = density.domain
    tensor = kind == QuadratureKind.TENSOR_GAUSS_HERMITE

    if density.mode == SolverMode.DOMAIN_DIRECT:
        if kind == QuadratureKind.MONTE_CARLO:
            return masked_monte_carlo_rule(model, lambda X: domain.contains_batch(X, MEMBERSHIP_TOL),
                                           resolution, stream)
        rule = domain.volume_rule(model, resolution, mc_samples, stream)
        if rule.is_stochastic:
            logger.warning("domain-direct rule on %s is Monte Carlo (N=%d); bounds carry stderr",
                           domain.kind.value, rule.sample_count)
        return rule

    if density.mode == SolverMode.WHOLE_SPACE_PENALIZED and tensor:
        try:
            return domain.split_rule(resolution)
        except CapabilityError:
            if domain.kind != DomainKind.WHOLE:
                _warn_if_coarse(resolution, density.alpha)

    return build_quadrature(model, kind, resolution, node_budget, stream)


def domain_kind(density: WeightDensity) -> str:
    return density.domain.kind.value if density.domain is not None else DomainKind.NONE.value


def tensor_spacing(resolution: int) -> float:
    """Widest gap between Gauss-Hermite nodes in [-3, 3]."""
    nodes, _ = gauss_hermite_1d(resolution)
    central = nodes[np.abs(nodes) <= 3.0]
    return float(np.diff(central).max()) if central.size > 1 else float("inf")


def _warn_if_coarse(resolution: int, alpha: Optional[float]) -> None:
    spacing = tensor_spacing(resolution)
    if alpha is not None and np.sqrt(alpha) < spacing:
        logger.warning("tensor rule with %d points (node gap %.3g) is coarse for the penalty width "
                       "sqrt(alpha)=%.3g; distances may not decrease", resolution, spacing, np.sqrt(alpha))
