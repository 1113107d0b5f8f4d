"""
Solve the assembled system and expose the solution u as a Hermite expansion.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy.linalg import cho_solve
from scipy.linalg.lapack import dpocon, dpotrf
from scipy.sparse.linalg import LinearOperator, cg

from ..core.constants import (
    DEFAULT_MC_SAMPLES,
    DENSE_SOLVE_LIMIT,
    LINEAR_SOLVE_RTOL,
    REFINEMENT_STEPS,
    TENSOR_NODE_BUDGET,
)
from ..core.errors import ConditioningError
from ..core.model import TruncatedModel
from .assembly import GalerkinSystem, assemble
from .density import WeightDensity, build_rule
from .hermite import HermiteBasis, HermiteExpansion

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GalerkinSolution:
    """Coefficients of u in the Hermite basis plus solve diagnostics."""
    coeffs: np.ndarray
    basis: HermiteBasis
    lam: float
    diagnostics: Dict[str, Any]
    system: GalerkinSystem = field(repr=False)

    @property
    def density(self) -> WeightDensity:
        return self.system.density

    @property
    def expansion(self) -> HermiteExpansion:
        return HermiteExpansion(self.basis, self.coeffs)

    def evaluate(self, x, order: int = 0):
        return evaluate(self, x, order)

    def coefficient(self, multi_index) -> float:
        return float(self.coeffs[self.basis.index_of(multi_index)])

    def coefficient_table(self) -> List[Tuple[str, float]]:
        """(multi-index, coefficient) rows in basis order."""
        return [("-".join(str(k) for k in idx), float(c))
                for idx, c in zip(self.basis.indices, self.coeffs)]


def _relative_residual(matrix: np.ndarray, coeffs: np.ndarray, rhs: np.ndarray) -> float:
    scale = float(np.linalg.norm(rhs))
    residual = float(np.linalg.norm(rhs - matrix @ coeffs))
    return residual / scale if scale > 0.0 else residual


def _pivot_report(matrix: np.ndarray, failed_minor: int) -> Dict[str, Any]:
    diag = np.diag(matrix)
    return {
        "failed_leading_minor": failed_minor,
        "size": int(matrix.shape[0]),
        "min_diagonal": float(diag.min()),
        "min_diagonal_index": int(diag.argmin()),
        "max_diagonal": float(diag.max()),
        "smallest_eigenvalue": float(np.linalg.eigvalsh(matrix)[0]),
    }


def _dense_solve(matrix: np.ndarray, rhs: np.ndarray, rtol: float) -> Tuple[np.ndarray, Dict[str, Any]]:
    factor, info = dpotrf(matrix, lower=False, clean=True)
    if info != 0:
        raise ConditioningError(
            f"Cholesky factorisation failed at leading minor {info} of {matrix.shape[0]}",
            _pivot_report(matrix, int(info)),
        )
    coeffs = cho_solve((factor, False), rhs)
    refinements = 0
    residual = _relative_residual(matrix, coeffs, rhs)
    while residual > rtol and refinements < REFINEMENT_STEPS:
        coeffs = coeffs + cho_solve((factor, False), rhs - matrix @ coeffs)
        refinements += 1
        residual = _relative_residual(matrix, coeffs, rhs)
    rcond, _ = dpocon(factor, float(np.linalg.norm(matrix, 1)))
    return coeffs, {
        "method": "cholesky",
        "refinements": refinements,
        "relative_residual": residual,
        "condition_estimate": float(1.0 / rcond) if rcond > 0 else float("inf"),
    }


def _cg_solve(matrix: np.ndarray, rhs: np.ndarray, rtol: float) -> Tuple[np.ndarray, Dict[str, Any]]:
    diag = np.diag(matrix).copy()
    if np.any(diag <= 0.0):
        bad = int(np.flatnonzero(diag <= 0.0)[0])
        raise ConditioningError(f"nonpositive diagonal entry at index {bad}", _pivot_report(matrix, bad + 1))
    jacobi = LinearOperator(matrix.shape, matvec=lambda v: v / diag, dtype=float)
    iterations = [0]

    def count(_):
        iterations[0] += 1

    coeffs, info = cg(matrix, rhs, rtol=rtol, atol=0.0, maxiter=10 * matrix.shape[0],
                      M=jacobi, callback=count)
    residual = _relative_residual(matrix, coeffs, rhs)
    if info != 0:
        logger.warning("CG stopped after %d iterations, relative residual %.3e", iterations[0], residual)
    return coeffs, {
        "method": "cg-jacobi",
        "iterations": iterations[0],
        "relative_residual": residual,
        "condition_estimate": float(diag.max() / diag.min()),
    }


def solve(system: GalerkinSystem, rtol: float = LINEAR_SOLVE_RTOL,
          dense_limit: int = DENSE_SOLVE_LIMIT) -> GalerkinSolution:
    """
    Solve (lambda M + A) c = b.

    Dense Cholesky with iterative refinement up to `dense_limit` unknowns,
    Jacobi-preconditioned conjugate gradients beyond.

    Raises:
        ConditioningError: factorisation failed; carries the pivot report.
    """
    matrix = system.operator
    size = matrix.shape[0]
    if size <= dense_limit:
        coeffs, diagnostics = _dense_solve(matrix, system.rhs, rtol)
    else:
        logger.warning("system has %d unknowns (> %d); switching from Cholesky to CG", size, dense_limit)
        coeffs, diagnostics = _cg_solve(matrix, system.rhs, rtol)
    diagnostics.update(size=size, rule=system.rule.description, mode=system.weight_kind)
    logger.debug("solved %d unknowns: %s", size, diagnostics)
    return GalerkinSolution(np.asarray(coeffs, dtype=float), system.basis, system.lam, diagnostics, system)


def evaluate(sol: GalerkinSolution, x, order: int = 0):
    """u(x), grad u(x) or Hessian of u at a point (order 0, 1, 2) or at the rows of a batch."""
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    points = np.asarray(x, dtype=float)
    single = points.ndim <= 1
    expansion = sol.expansion
    batch = points.reshape(1, sol.basis.n) if single else points
    out = (expansion.value_batch, expansion.gradient_batch, expansion.hessian_batch)[order](batch)
    return (float(out[0]) if order == 0 else out[0]) if single else out


def solve_problem(
    model: TruncatedModel,
    density: WeightDensity,
    f,
    lam: float,
    degree: int,
    quadrature: Dict[str, Any],
    mc_samples: int = DEFAULT_MC_SAMPLES,
    threads: int = 1,
    node_budget: int = TENSOR_NODE_BUDGET,
    stream: int = 0,
    rule=None,
) -> GalerkinSolution:
    """Basis, rule, assembly and solve in one call."""
    basis = HermiteBasis(model.n, int(degree))
    if rule is None:
        rule = build_rule(model, density, quadrature, mc_samples, node_budget, stream)
    system = assemble(model, basis, density, f, lam, rule, threads=threads)
    return solve(system)
