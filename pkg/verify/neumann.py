"""
Neumann trace condition <grad u, grad G> = 0 on G^{-1}(0), measured in L^2 of the
weighted surface measure e^{-U} rho.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.constants import (
    DEFAULT_BOUNDARY_RESOLUTION,
    DEFAULT_MC_SAMPLES,
    NEUMANN_REDUCTION,
    TENSOR_NODE_BUDGET,
    SolverMode,
)
from ..core.model import TruncatedModel
from ..core.quadrature import QuadratureRule
from ..domains.base import ConvexDomain
from ..prox.potential import ConvexPotential
from ..solver.density import build_density
from ..solver.galerkin import GalerkinSolution, solve_problem

logger = logging.getLogger(__name__)


@dataclass
class NeumannReport:
    """Boundary flux residual, optionally along a series of Galerkin degrees."""
    residual: float
    boundary_rule: str
    stderr: float = 0.0
    degree_series: List[Tuple[int, float]] = field(default_factory=list)

    @property
    def residuals(self) -> List[float]:
        return [r for _, r in self.degree_series]

    @property
    def nonincreasing(self) -> bool:
        values = self.residuals
        return all(b <= a for a, b in zip(values, values[1:]))

    @property
    def strictly_decreasing(self) -> bool:
        values = self.residuals
        return all(b < a for a, b in zip(values, values[1:]))

    def meets_reduction(self, factor: float = NEUMANN_REDUCTION) -> bool:
        """Last residual <= factor x first residual."""
        values = self.residuals
        if len(values) < 2:
            return True
        return values[-1] <= factor * values[0]

    def rows(self) -> List[List[float]]:
        return [[d, r] for d, r in self.degree_series]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "residual": self.residual,
            "stderr": self.stderr,
            "boundary_rule": self.boundary_rule,
            "degree_series": [list(p) for p in self.degree_series],
            "nonincreasing": self.nonincreasing,
        }


def boundary_flux(sol: GalerkinSolution, domain: ConvexDomain, rule: QuadratureRule) -> np.ndarray:
    """<grad u, grad G / |grad G|> at the boundary nodes."""
    normals = domain.unit_normal_batch(rule.nodes)
    return np.einsum("na,na->n", sol.expansion.gradient_batch(rule.nodes), normals)


def neumann_residual(
    sol: GalerkinSolution,
    domain: ConvexDomain,
    weight: ConvexPotential,
    boundary_resolution: int = DEFAULT_BOUNDARY_RESOLUTION,
    rng: Optional[np.random.Generator] = None,
    rule: Optional[QuadratureRule] = None,
) -> NeumannReport:
    """
    residual^2 = int_{G=0} <grad u, nu>^2 e^{-U} d rho.

    Raises:
        CapabilityError: the domain has no boundary parametrisation.
    """
    rule = rule or domain.boundary_rule(boundary_resolution, rng)
    if rule.size == 0:
        return NeumannReport(0.0, rule.description)
    flux = boundary_flux(sol, domain, rule)
    values = np.exp(-weight.value_batch(rule.nodes)) * flux ** 2
    estimate, stderr = rule.integrate_with_stderr(values)
    residual = math.sqrt(max(estimate, 0.0))
    return NeumannReport(residual, rule.description,
                         stderr / (2.0 * residual) if residual > 0.0 else 0.0)


def neumann_series(
    model: TruncatedModel,
    weight: ConvexPotential,
    domain: ConvexDomain,
    f,
    lam: float,
    degrees: Sequence[int],
    quadrature: Dict[str, Any],
    boundary_resolution: int = DEFAULT_BOUNDARY_RESOLUTION,
    mc_samples: int = DEFAULT_MC_SAMPLES,
    threads: int = 1,
    node_budget: int = TENSOR_NODE_BUDGET,
    stream: int = 1,
) -> NeumannReport:
    """
    Direct domain solves at each degree, all measured on one boundary rule.
    The returned residual is that of the highest degree.
    """
    density = build_density(SolverMode.DOMAIN_DIRECT, weight, domain)
    rule = domain.boundary_rule(boundary_resolution, model.sampler(stream))
    series = []
    last = None
    for degree in degrees:
        sol = solve_problem(model, density, f, lam, int(degree), quadrature, mc_samples,
                            threads=threads, node_budget=node_budget)
        last = neumann_residual(sol, domain, weight, rule=rule)
        logger.info("degree=%d neumann residual=%.6e", degree, last.residual)
        series.append((int(degree), last.residual))
    if last is None:
        raise ValueError("neumann_series needs at least one degree")
    return NeumannReport(last.residual, rule.description, last.stderr, series)
