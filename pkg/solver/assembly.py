"""
Galerkin assembly of

    lambda int u phi w d gamma + int <grad u, grad phi> w d gamma = int f phi w d gamma

over a quadrature rule. Nodes are processed in fixed chunks on a thread pool and the
chunk sums are combined by a pairwise tree in node order, so the result is bit-stable
for a fixed rule regardless of the worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, eigvalsh

from ..core.constants import ASSEMBLY_CHUNK
from ..core.errors import AssemblyConsistencyError, NonFiniteValueError
from ..core.model import TruncatedModel
from ..core.quadrature import QuadratureRule
from .density import WeightDensity
from .hermite import HermiteBasis
from .rhs import Forcing, as_forcing

logger = logging.getLogger(__name__)

_Partial = Tuple[np.ndarray, np.ndarray, np.ndarray, float]


@dataclass(frozen=True)
class GalerkinSystem:
    """Stiffness A, mass M and load b for one density, rule and lambda."""
    stiffness: np.ndarray
    mass: np.ndarray
    rhs: np.ndarray
    lam: float
    basis: HermiteBasis
    density: WeightDensity
    rule: QuadratureRule
    forcing: Forcing
    total_weight: float = 0.0   # int w d gamma over the rule

    @property
    def weight_kind(self) -> str:
        return self.density.mode.value

    @property
    def operator(self) -> np.ndarray:
        """lambda M + A."""
        return self.lam * self.mass + self.stiffness


def _first_bad(values: np.ndarray) -> int:
    return int(np.flatnonzero(~np.isfinite(values))[0])


def _chunk_partial(basis: HermiteBasis, density: WeightDensity, forcing: Forcing,
                   nodes: np.ndarray, weights: np.ndarray) -> _Partial:
    wrho = weights * density.values(nodes)
    if not np.all(np.isfinite(wrho)):
        raise NonFiniteValueError("weight density", nodes[_first_bad(wrho)].tolist())
    fvals = forcing(nodes)
    if not np.all(np.isfinite(fvals)):
        raise NonFiniteValueError("forcing term", nodes[_first_bad(fvals)].tolist())
    keep = wrho > 0.0
    if not keep.any():
        k = basis.size
        return np.zeros((k, k)), np.zeros((k, k)), np.zeros(k), 0.0
    nodes, wrho, fvals = nodes[keep], wrho[keep], fvals[keep]
    phi, grad = basis.evaluate(nodes, order=1)
    weighted = wrho[:, None] * phi
    mass = phi.T @ weighted
    stiffness = np.einsum("nka,n,nla->kl", grad, wrho, grad, optimize=True)
    load = weighted.T @ fvals
    return stiffness, mass, load, float(wrho.sum())


def _add(left: _Partial, right: _Partial) -> _Partial:
    return (left[0] + right[0], left[1] + right[1], left[2] + right[2], left[3] + right[3])


def tree_reduce(parts: List, combine: Callable = _add):
    """Pairwise reduction in list order."""
    if not parts:
        raise ValueError("nothing to reduce")
    while len(parts) > 1:
        merged = [combine(parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            merged.append(parts[-1])
        parts = merged
    return parts[0]


def assemble(
    model: TruncatedModel,
    basis: HermiteBasis,
    density: WeightDensity,
    f,
    lam: float,
    rule: QuadratureRule,
    threads: int = 1,
    chunk: int = ASSEMBLY_CHUNK,
) -> GalerkinSystem:
    """
    Assemble the weak form for the density on the rule.

    Args:
        model: Truncated model; fixes the dimension.
        basis: Hermite basis of the same dimension.
        density: e^{-V}, with the domain indicator for domain-direct problems.
        f: Forcing term (Forcing or vectorised callable).
        lam: lambda > 0.
        rule: Integration rule against the standard Gaussian.
        threads: Worker count for the chunked node loop.

    Raises:
        NonFiniteValueError: density or forcing is not finite at some node.
        AssemblyConsistencyError: lambda M + A is not positive definite.
    """
    if not lam > 0.0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if rule.dim != model.n or basis.n != model.n:
        raise ValueError(f"dimension mismatch: model n={model.n}, basis n={basis.n}, rule n={rule.dim}")
    forcing = as_forcing(f)
    bounds = [(i, min(i + chunk, rule.size)) for i in range(0, rule.size, chunk)]

    def work(bound):
        lo, hi = bound
        return _chunk_partial(basis, density, forcing, rule.nodes[lo:hi], rule.weights[lo:hi])

    workers = max(1, int(threads))
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    stiffness, mass, load, total = tree_reduce(parts)

    stiffness = 0.5 * (stiffness + stiffness.T)
    mass = 0.5 * (mass + mass.T)
    logger.debug("assembled %d x %d system over %d nodes in %d chunks (%s)",
                 basis.size, basis.size, rule.size, len(bounds), density.mode.value)

    system_matrix = lam * mass + stiffness
    try:
        cho_factor(system_matrix)
    except LinAlgError:
        smallest = float(eigvalsh(system_matrix, subset_by_index=[0, 0])[0])
        raise AssemblyConsistencyError(
            f"lambda*M + A is not positive definite (smallest eigenvalue {smallest:.3e}); "
            f"the rule ({rule.description}, {rule.size} nodes) cannot resolve {basis.size} basis functions"
        ) from None

    return GalerkinSystem(stiffness, mass, load, float(lam), basis, density, rule, forcing, total)
