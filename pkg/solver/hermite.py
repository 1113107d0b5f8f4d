"""
Tensor Hermite basis with a total-degree cap.

One-dimensional factors are the orthonormal probabilists' Hermite polynomials

    h_0 = 1,  h_1 = x,  h_{k+1} = (x h_k - sqrt(k) h_{k-1}) / sqrt(k + 1),

with h_k' = sqrt(k) h_{k-1}; they are orthonormal against N(0, 1).
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from ..core.constants import EVALUATION_CHUNK

MultiIndex = Tuple[int, ...]


def in_chunks(fn: Callable[[np.ndarray], np.ndarray], X: np.ndarray, chunk: int = EVALUATION_CHUNK) -> np.ndarray:
    """fn over consecutive row blocks of X, stacked in row order."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if chunk < 1:
        raise ValueError(f"chunk must be positive, got {chunk}")
    if X.shape[0] <= chunk:
        return fn(X)
    return np.concatenate([fn(X[i:i + chunk]) for i in range(0, X.shape[0], chunk)], axis=0)


def hermite_table(x: np.ndarray, degree: int) -> np.ndarray:
    """Orthonormal h_0..h_degree at x; shape x.shape + (degree + 1,)."""
    x = np.asarray(x, dtype=float)
    table = np.empty(x.shape + (degree + 1,))
    table[..., 0] = 1.0
    if degree >= 1:
        table[..., 1] = x
    for k in range(1, degree):
        table[..., k + 1] = (x * table[..., k] - math.sqrt(k) * table[..., k - 1]) / math.sqrt(k + 1)
    return table


def hermite_derivative_tables(x: np.ndarray, degree: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Values, first and second derivatives of h_0..h_degree."""
    values = hermite_table(x, degree)
    d1 = np.zeros_like(values)
    d2 = np.zeros_like(values)
    for k in range(1, degree + 1):
        d1[..., k] = math.sqrt(k) * values[..., k - 1]
    for k in range(2, degree + 1):
        d2[..., k] = math.sqrt(k * (k - 1)) * values[..., k - 2]
    return values, d1, d2


def _compositions(total: int, parts: int) -> List[MultiIndex]:
    """All multi-indices of length `parts` summing to `total`, first entry descending."""
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def total_degree_indices(n: int, degree: int) -> List[MultiIndex]:
    """Multi-indices with |k|_1 <= degree in graded order."""
    indices = []
    for total in range(degree + 1):
        indices.extend(_compositions(total, n))
    return indices


@dataclass(frozen=True)
class HermiteBasis:
    """Products of orthonormal Hermite polynomials, total degree <= degree."""
    n: int
    degree: int
    indices: Tuple[MultiIndex, ...] = field(init=False, repr=False)
    _lookup: Dict[MultiIndex, int] = field(init=False, repr=False, compare=False)
    _array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1 or self.degree < 0:
            raise ValueError(f"invalid Hermite basis n={self.n}, degree={self.degree}")
        indices = tuple(total_degree_indices(self.n, self.degree))
        array = np.array(indices, dtype=int).reshape(len(indices), self.n)
        array.setflags(write=False)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "_lookup", {k: i for i, k in enumerate(indices)})
        object.__setattr__(self, "_array", array)

    @property
    def size(self) -> int:
        return len(self.indices)

    def index_of(self, multi_index: Sequence[int]) -> int:
        key = tuple(int(k) for k in multi_index)
        if len(key) != self.n or key not in self._lookup:
            raise KeyError(f"multi-index {key} not in basis (n={self.n}, degree={self.degree})")
        return self._lookup[key]

    def total_degrees(self) -> np.ndarray:
        return self._array.sum(axis=1)

    def evaluate(self, X: np.ndarray, order: int = 0):
        """
        Basis values at the rows of X.

        Returns:
            order 0: Phi (N, K)
            order 1: (Phi, grad) with grad (N, K, n)
            order 2: (Phi, grad, hess) with hess (N, K, n, n)
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n:
            raise ValueError(f"points have dimension {X.shape[1]}, basis has n={self.n}")
        values, d1, d2 = hermite_derivative_tables(X, self.degree)   # (N, n, d+1)
        K = self._array
        # factor[a] has shape (N, K): h_{k_a}(x_a) for every basis function
        factors = [values[:, a, K[:, a]] for a in range(self.n)]
        phi = np.prod(np.stack(factors, axis=0), axis=0) if self.n > 1 else factors[0]
        if order == 0:
            return phi

        firsts = [d1[:, a, K[:, a]] for a in range(self.n)]
        grad = np.empty(phi.shape + (self.n,))
        for a in range(self.n):
            term = firsts[a]
            for b in range(self.n):
                if b != a:
                    term = term * factors[b]
            grad[..., a] = term
        if order == 1:
            return phi, grad

        seconds = [d2[:, a, K[:, a]] for a in range(self.n)]
        hess = np.empty(phi.shape + (self.n, self.n))
        for a in range(self.n):
            for b in range(a, self.n):
                if a == b:
                    term = seconds[a]
                else:
                    term = firsts[a] * firsts[b]
                for c in range(self.n):
                    if c != a and c != b:
                        term = term * factors[c]
                hess[..., a, b] = term
                hess[..., b, a] = term
        return phi, grad, hess


@dataclass(frozen=True)
class HermiteExpansion:
    """u = sum_k coeffs_k phi_k; pointwise value, gradient and Hessian."""
    basis: HermiteBasis
    coeffs: np.ndarray
    chunk: int = field(default=EVALUATION_CHUNK, compare=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float).ravel()
        if coeffs.shape[0] != self.basis.size:
            raise ValueError(f"{coeffs.shape[0]} coefficients for a basis of size {self.basis.size}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def single(cls, basis: HermiteBasis, multi_index: Sequence[int]) -> "HermiteExpansion":
        coeffs = np.zeros(basis.size)
        coeffs[basis.index_of(multi_index)] = 1.0
        return cls(basis, coeffs)

    def value_batch(self, X):
        return in_chunks(lambda B: self.basis.evaluate(B, 0) @ self.coeffs, X, self.chunk)

    def gradient_batch(self, X):
        return in_chunks(lambda B: np.einsum("nka,k->na", self.basis.evaluate(B, 1)[1], self.coeffs), X, self.chunk)

    def hessian_batch(self, X):
        return in_chunks(lambda B: np.einsum("nkab,k->nab", self.basis.evaluate(B, 2)[2], self.coeffs), X,
                         self.chunk)

    def value(self, x) -> float:
        return float(self.value_batch(np.atleast_2d(x))[0])

    def gradient(self, x) -> np.ndarray:
        return self.gradient_batch(np.atleast_2d(x))[0]

    def hessian(self, x) -> np.ndarray:
        return self.hessian_batch(np.atleast_2d(x))[0]


def hermite_function(n: int, multi_index: Sequence[int]) -> HermiteExpansion:
    """The single product h_{k_1}(x_1) ... h_{k_n}(x_n) as an expansion."""
    degree = int(sum(multi_index))
    return HermiteExpansion.single(HermiteBasis(n, degree), multi_index)


def project_coefficients(basis: HermiteBasis, values: np.ndarray, rule) -> np.ndarray:
    """Gaussian L^2 projection coefficients int f phi_k d gamma for f sampled at rule nodes."""
    weighted = rule.weights * np.asarray(values, dtype=float).ravel()
    out = np.zeros(basis.size)
    for lo in range(0, rule.size, EVALUATION_CHUNK):
        hi = lo + EVALUATION_CHUNK
        out += basis.evaluate(rule.nodes[lo:hi], 0).T @ weighted[lo:hi]
    return out
