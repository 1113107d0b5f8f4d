"""
Quadrature rules against the standard Gaussian on R^n.

Base rules (tensor Gauss-Hermite, Monte Carlo) are probability rules whose weights
sum to one. Domain-adapted rules (rotated half-line rule for halfspaces, masked
Monte Carlo) and surface rules reuse the same container with their own kind.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .constants import (
    HALF_LINE_POINTS,
    HALF_LINE_SPAN,
    QUADRATURE_WEIGHT_SUM_TOL,
    TENSOR_NODE_BUDGET,
    QuadratureKind,
)
from .errors import NodeBudgetError
from .model import TruncatedModel

logger = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)

_STOCHASTIC = {
    QuadratureKind.MONTE_CARLO,
    QuadratureKind.MASKED_MONTE_CARLO,
    QuadratureKind.SURFACE_MONTE_CARLO,
}


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes (N, n) and positive weights (N,) plus how they were produced."""
    kind: QuadratureKind
    nodes: np.ndarray
    weights: np.ndarray
    description: str = ""
    sample_count: int = 0  # Monte Carlo draws behind the rule (masked rules drop zero nodes)

    def __post_init__(self):
        nodes = np.atleast_2d(np.asarray(self.nodes, dtype=float))
        weights = np.asarray(self.weights, dtype=float).ravel()
        if nodes.shape[0] != weights.shape[0]:
            raise ValueError(f"{nodes.shape[0]} nodes but {weights.shape[0]} weights")
        if np.any(weights < 0.0):
            raise ValueError("quadrature weights must be nonnegative")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if self.sample_count == 0:
            object.__setattr__(self, "sample_count", weights.shape[0])
        if self.kind in (QuadratureKind.TENSOR_GAUSS_HERMITE, QuadratureKind.MONTE_CARLO):
            total = float(weights.sum())
            if abs(total - 1.0) > QUADRATURE_WEIGHT_SUM_TOL * max(1, nodes.shape[1]):
                raise ValueError(f"probability rule weights sum to {total!r}, expected 1")

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def is_stochastic(self) -> bool:
        return self.kind in _STOCHASTIC

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Sum of weights * values over the first axis."""
        values = np.asarray(values, dtype=float)
        return np.tensordot(self.weights, values, axes=(0, 0))

    def integrate_with_stderr(self, values: np.ndarray) -> Tuple[float, float]:
        """Integral and its Monte Carlo standard error (0 for deterministic rules)."""
        values = np.asarray(values, dtype=float).ravel()
        estimate = float(self.weights @ values)
        if not self.is_stochastic or self.sample_count < 2:
            return estimate, 0.0
        count = self.sample_count
        # every kept node carries weight scale/count, dropped nodes contribute zeros
        terms = self.weights * values * count
        mean = terms.sum() / count
        second = (terms ** 2).sum() / count
        variance = max(second - mean ** 2, 0.0) * count / (count - 1)
        return estimate, math.sqrt(variance / count)

    def restrict(self, mask: np.ndarray, kind: Optional[QuadratureKind] = None,
                 description: str = "") -> "QuadratureRule":
        """Rule keeping only nodes where mask holds."""
        mask = np.asarray(mask, dtype=bool)
        return QuadratureRule(
            kind=kind or self.kind,
            nodes=self.nodes[mask],
            weights=self.weights[mask],
            description=description or self.description,
            sample_count=self.sample_count,
        )


# =============================================================================
# ONE-DIMENSIONAL BUILDING BLOCKS
# =============================================================================

def gauss_hermite_1d(q: int) -> Tuple[np.ndarray, np.ndarray]:
    """Probabilists' Gauss-Hermite rule normalised against N(0, 1)."""
    x, w = np.polynomial.hermite_e.hermegauss(q)
    return x, w / SQRT_2PI


def half_line_rule(s: float, points: int = HALF_LINE_POINTS,
                   span: float = HALF_LINE_SPAN) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rule for integrals over (-inf, s] against the standard Gaussian density.

    Gauss-Legendre on [min(s, 0) - span, s] with the density folded into the weights;
    the truncated tail carries less than phi(span) mass.
    """
    lo = min(s, 0.0) - span
    x, w = np.polynomial.legendre.leggauss(points)
    half = 0.5 * (s - lo)
    t = lo + half * (x + 1.0)
    density = np.exp(-0.5 * t * t) / SQRT_2PI
    return t, half * w * density


def householder_to(direction: np.ndarray) -> np.ndarray:
    """Symmetric orthogonal matrix sending e_1 to the unit vector `direction`."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    n = d.shape[0]
    e1 = np.zeros(n)
    e1[0] = 1.0
    v = e1 - d
    norm_v = np.linalg.norm(v)
    if norm_v < 1e-14:
        return np.eye(n)
    v = v / norm_v
    return np.eye(n) - 2.0 * np.outer(v, v)


def _tensor_grid(x: np.ndarray, w: np.ndarray, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    if dim == 0:
        return np.zeros((1, 0)), np.ones(1)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    return nodes, weights


# =============================================================================
# RULE FACTORIES
# =============================================================================

def build_quadrature(
    model: TruncatedModel,
    kind,
    resolution: int,
    node_budget: int = TENSOR_NODE_BUDGET,
    stream: int = 0,
) -> QuadratureRule:
    """
    Rule integrating against the n-dimensional standard Gaussian.

    Tensor rules use `resolution` points per axis; Monte Carlo rules draw
    `resolution` points from the model's seeded substream `stream`.
    """
    kind = QuadratureKind(kind)
    if int(resolution) < 1:
        raise ValueError(f"quadrature resolution must be >= 1, got {resolution}")
    n = model.n

    if kind == QuadratureKind.TENSOR_GAUSS_HERMITE:
        total = int(resolution) ** n
        if total > node_budget:
            raise NodeBudgetError(total, node_budget)
        x, w = gauss_hermite_1d(int(resolution))
        nodes, weights = _tensor_grid(x, w, n)
        weights = weights / weights.sum()
        logger.debug("tensor Gauss-Hermite rule: n=%d q=%d nodes=%d", n, resolution, total)
        return QuadratureRule(kind, nodes, weights, f"tensor-gauss-hermite q={resolution}")

    if kind == QuadratureKind.MONTE_CARLO:
        nodes = model.sample(int(resolution), stream=stream)
        weights = np.full(int(resolution), 1.0 / int(resolution))
        return QuadratureRule(kind, nodes, weights, f"monte-carlo N={resolution} stream={stream}")

    raise ValueError(f"build_quadrature does not produce '{kind.value}' rules")


def halfspace_rule(
    normal: np.ndarray,
    offset: float,
    normal_points: int = HALF_LINE_POINTS,
    tangential_points: int = 16,
    node_budget: int = TENSOR_NODE_BUDGET,
) -> QuadratureRule:
    """
    Rule for integrals over {<normal, x> <= offset} against the standard Gaussian.

    Coordinates are rotated so normal/|normal| is axis 1: half-line rule on that axis,
    tensor Gauss-Hermite on the n-1 tangential axes.
    """
    normal = np.asarray(normal, dtype=float)
    n = normal.shape[0]
    norm = float(np.linalg.norm(normal))
    s = offset / norm
    total = normal_points * tangential_points ** (n - 1)
    if total > node_budget:
        raise NodeBudgetError(total, node_budget)
    t, wt = half_line_rule(s, normal_points)
    xg, wg = gauss_hermite_1d(tangential_points)
    tang_nodes, tang_weights = _tensor_grid(xg, wg, n - 1)
    y = np.concatenate(
        [np.repeat(t, tang_nodes.shape[0])[:, None], np.tile(tang_nodes, (t.shape[0], 1))],
        axis=1,
    )
    weights = np.outer(wt, tang_weights).ravel()
    nodes = y @ householder_to(normal).T
    return QuadratureRule(
        QuadratureKind.HALFSPACE_GAUSS,
        nodes,
        weights,
        f"halfspace-gauss s={s:.6g} normal={normal_points} tangential={tangential_points}",
    )


def masked_monte_carlo_rule(
    model: TruncatedModel,
    indicator: Callable[[np.ndarray], np.ndarray],
    samples: int,
    stream: int = 0,
) -> QuadratureRule:
    """Monte Carlo rule restricted to {indicator(x)}; weights stay 1/N."""
    nodes = model.sample(int(samples), stream=stream)
    mask = np.asarray(indicator(nodes), dtype=bool)
    weights = np.full(int(samples), 1.0 / int(samples))
    logger.debug("masked Monte Carlo rule: kept %d of %d samples", int(mask.sum()), samples)
    return QuadratureRule(
        QuadratureKind.MASKED_MONTE_CARLO,
        nodes[mask],
        weights[mask],
        f"masked-monte-carlo N={samples} stream={stream}",
        sample_count=int(samples),
    )
