"""
Truncated Wiener model.

Coordinates are taken w.r.t. the orthonormal Cameron-Martin basis {sqrt(lambda_k) e_k}
of the classical Wiener space on [0, 1], with

    lambda_k = 4 / (pi^2 (2k - 1)^2),    e_k(xi) = sqrt(2) sin(xi / sqrt(lambda_k)).

In these coordinates the Gaussian law is standard on R^n, the H-inner product is the
Euclidean one and the coordinate functional e^_k is x -> x_k.
"""

import math
from dataclasses import dataclass, field
from typing import List, Tuple, Union

import numpy as np

from .constants import DEFAULT_DIMENSION, DEFAULT_SEED, DEFAULT_XI_NODES
from .errors import IndexRangeError

ArrayLike = Union[float, np.ndarray]


def kl_eigenvalue(k: int) -> float:
    """Eigenvalue lambda_k of the Brownian covariance, k >= 1."""
    return 4.0 / (math.pi ** 2 * (2 * k - 1) ** 2)


def gauss_legendre_unit(q: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(q)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class TruncatedModel:
    """
    Dimension-n coordinate representation of the Wiener / Cameron-Martin pair.

    Immutable; sampling goes through per-stream generators derived from `seed`,
    never through a shared global generator.
    """
    n: int = DEFAULT_DIMENSION
    seed: int = DEFAULT_SEED
    eigenvalues: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError(f"truncation dimension must be >= 1, got {self.n}")
        lam = np.array([kl_eigenvalue(k) for k in range(1, self.n + 1)])
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)

    # ------------------------------------------------------------------
    # basis
    # ------------------------------------------------------------------

    def _check_index(self, k: int) -> None:
        if not 1 <= k <= self.n:
            raise IndexRangeError("k", k, self.n)

    def eigenvalue(self, k: int) -> float:
        """lambda_k = 4 / (pi^2 (2k-1)^2) for 1 <= k <= n."""
        self._check_index(k)
        return float(self.eigenvalues[k - 1])

    def basis_eval(self, k: int, xi: ArrayLike) -> ArrayLike:
        """e_k(xi) = sqrt(2) sin(xi / sqrt(lambda_k)); xi in [0, 1]."""
        self._check_index(k)
        xi_arr = np.asarray(xi, dtype=float)
        if np.any(xi_arr < 0.0) or np.any(xi_arr > 1.0):
            raise ValueError(f"xi must lie in [0, 1], got {xi}")
        value = math.sqrt(2.0) * np.sin(xi_arr / math.sqrt(self.eigenvalues[k - 1]))
        return float(value) if np.ndim(value) == 0 else value

    def scaled_basis_matrix(self, xi: np.ndarray) -> np.ndarray:
        """Matrix E with E[j, k] = sqrt(lambda_k) e_k(xi_j)."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        root = np.sqrt(self.eigenvalues)
        return math.sqrt(2.0) * np.sin(np.outer(xi, 1.0 / root)) * root

    def embed_path(self, x: np.ndarray, xi: ArrayLike) -> ArrayLike:
        """Path f(xi) = sum_k x_k sqrt(lambda_k) e_k(xi); f(0) = 0."""
        x = self._as_point(x)
        xi_arr = np.asarray(xi, dtype=float)
        if np.any(xi_arr < 0.0) or np.any(xi_arr > 1.0):
            raise ValueError(f"xi must lie in [0, 1], got {xi}")
        values = self.scaled_basis_matrix(xi_arr.ravel()) @ x
        if np.ndim(xi_arr) == 0:
            return float(values[0])
        return values.reshape(xi_arr.shape)

    def l2_coordinates(self, path, q: int = 256) -> np.ndarray:
        """Coordinates x_k = <f, e_k>_{L^2} / sqrt(lambda_k) of a path callable."""
        xi, w = gauss_legendre_unit(q)
        values = np.asarray(path(xi), dtype=float)
        root = np.sqrt(self.eigenvalues)
        basis = math.sqrt(2.0) * np.sin(np.outer(xi, 1.0 / root))
        return (basis.T @ (w * values)) / root

    def path_quadrature(self, q: int = DEFAULT_XI_NODES) -> Tuple[np.ndarray, np.ndarray]:
        """Gauss-Legendre rule on [0, 1] used for path integrals."""
        return gauss_legendre_unit(q)

    # ------------------------------------------------------------------
    # sampling
    # ------------------------------------------------------------------

    def sampler(self, stream: int = 0) -> np.random.Generator:
        """Counter-based generator for one substream; equal (seed, stream) give equal draws."""
        seq = np.random.SeedSequence([int(self.seed) & 0xFFFFFFFFFFFFFFFF, int(stream)])
        return np.random.Generator(np.random.Philox(seq))

    def split(self, count: int, first_stream: int = 0) -> List[np.random.Generator]:
        """Independent generators for parallel workers."""
        return [self.sampler(first_stream + i) for i in range(count)]

    def sample(self, size: int, stream: int = 0) -> np.ndarray:
        """Standard Gaussian points in R^n, shape (size, n)."""
        return self.sampler(stream).standard_normal((size, self.n))

    # ------------------------------------------------------------------
    # helpers
    # ------------------------------------------------------------------

    def _as_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).ravel()
        if x.shape[0] != self.n:
            raise ValueError(f"point has dimension {x.shape[0]}, model has n={self.n}")
        return x
