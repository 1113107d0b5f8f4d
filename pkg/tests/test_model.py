"""
Truncated model and quadrature rules.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import norm

from ..core.constants import QuadratureKind
from ..core.errors import IndexRangeError, NodeBudgetError
from ..core.model import TruncatedModel, gauss_legendre_unit, kl_eigenvalue
from ..core.quadrature import (
    QuadratureRule,
    build_quadrature,
    gauss_hermite_1d,
    half_line_rule,
    halfspace_rule,
    householder_to,
    masked_monte_carlo_rule,
)

coords = st.lists(st.floats(min_value=-3.0, max_value=3.0, allow_nan=False), min_size=4, max_size=4)


# =============================================================================
# MODEL
# =============================================================================

class TestEigenvalues:

    def test_first_eigenvalue(self):
        assert kl_eigenvalue(1) == pytest.approx(4.0 / math.pi ** 2, rel=1e-12)

    def test_model_eigenvalues_follow_formula(self):
        model = TruncatedModel(n=6)
        expected = [4.0 / (math.pi ** 2 * (2 * k - 1) ** 2) for k in range(1, 7)]
        np.testing.assert_allclose(model.eigenvalues, expected, rtol=1e-15)
        assert np.all(np.diff(model.eigenvalues) < 0.0)

    @pytest.mark.parametrize("k", [0, 5])
    def test_index_outside_range(self, k):
        with pytest.raises(IndexRangeError):
            TruncatedModel(n=4).eigenvalue(k)

    def test_dimension_must_be_positive(self):
        with pytest.raises(ValueError):
            TruncatedModel(n=0)

    def test_eigenvalues_are_read_only(self):
        model = TruncatedModel(n=3)
        with pytest.raises(ValueError):
            model.eigenvalues[0] = 1.0


class TestBasis:

    def test_basis_orthonormal_in_l2(self):
        model = TruncatedModel(n=5)
        xi, w = gauss_legendre_unit(256)
        E = np.stack([model.basis_eval(k, xi) for k in range(1, 6)], axis=1)
        np.testing.assert_allclose(E.T @ (w[:, None] * E), np.eye(5), atol=1e-12)

    def test_basis_rejects_points_outside_unit_interval(self):
        with pytest.raises(ValueError):
            TruncatedModel(n=2).basis_eval(1, 1.5)

    @given(coords)
    def test_paths_start_at_zero(self, x):
        assert TruncatedModel(n=4).embed_path(np.array(x), 0.0) == pytest.approx(0.0, abs=1e-15)

    @given(coords)
    def test_coordinates_recovered_from_path(self, x):
        model = TruncatedModel(n=4)
        x = np.array(x)
        recovered = model.l2_coordinates(lambda xi: model.embed_path(x, xi))
        np.testing.assert_allclose(recovered, x, atol=1e-10)

    def test_path_dimension_mismatch(self):
        with pytest.raises(ValueError):
            TruncatedModel(n=3).embed_path(np.zeros(2), 0.5)


class TestSampling:

    def test_same_stream_same_draws(self):
        a = TruncatedModel(n=3, seed=42).sample(100, stream=2)
        b = TruncatedModel(n=3, seed=42).sample(100, stream=2)
        np.testing.assert_array_equal(a, b)

    def test_streams_are_distinct(self):
        model = TruncatedModel(n=3, seed=42)
        assert not np.array_equal(model.sample(10, stream=0), model.sample(10, stream=1))

    def test_split_matches_individual_streams(self):
        model = TruncatedModel(n=2, seed=3)
        gens = model.split(3, first_stream=4)
        np.testing.assert_array_equal(gens[1].standard_normal(5), model.sampler(5).standard_normal(5))


# =============================================================================
# QUADRATURE
# =============================================================================

class TestBaseRules:

    def test_tensor_rule_moments(self):
        rule = build_quadrature(TruncatedModel(n=2), QuadratureKind.TENSOR_GAUSS_HERMITE, 8)
        assert rule.size == 64
        assert rule.mass == pytest.approx(1.0, abs=1e-14)
        x = rule.nodes
        assert rule.integrate(x[:, 0] ** 2) == pytest.approx(1.0, abs=1e-13)
        assert rule.integrate(x[:, 1] ** 4) == pytest.approx(3.0, abs=1e-12)
        assert rule.integrate(x[:, 0] * x[:, 1]) == pytest.approx(0.0, abs=1e-14)

    def test_one_dimensional_rule_is_normalised(self):
        _, w = gauss_hermite_1d(20)
        assert w.sum() == pytest.approx(1.0, abs=1e-14)

    def test_node_budget(self):
        with pytest.raises(NodeBudgetError):
            build_quadrature(TruncatedModel(n=4), "tensor-gauss-hermite", 10, node_budget=1000)

    def test_monte_carlo_rule(self):
        rule = build_quadrature(TruncatedModel(n=2, seed=1), "monte-carlo", 20000, stream=3)
        assert rule.is_stochastic
        estimate, stderr = rule.integrate_with_stderr(rule.nodes[:, 0] ** 2)
        assert stderr > 0.0
        assert abs(estimate - 1.0) <= 6.0 * stderr

    def test_deterministic_rule_has_no_stderr(self):
        rule = build_quadrature(TruncatedModel(n=1), "tensor-gauss-hermite", 10)
        _, stderr = rule.integrate_with_stderr(rule.nodes[:, 0] ** 2)
        assert stderr == 0.0

    def test_rejects_negative_weights(self):
        with pytest.raises(ValueError):
            QuadratureRule(QuadratureKind.SURFACE, np.zeros((2, 1)), np.array([1.0, -1.0]))

    def test_probability_rule_must_sum_to_one(self):
        with pytest.raises(ValueError):
            QuadratureRule(QuadratureKind.MONTE_CARLO, np.zeros((2, 1)), np.array([0.25, 0.25]))


class TestDomainRules:

    def test_half_line_mass(self):
        _, w = half_line_rule(0.0)
        assert w.sum() == pytest.approx(0.5, abs=1e-13)

    @pytest.mark.parametrize("s", [-1.5, 0.3, 2.0])
    def test_half_line_mass_matches_normal_cdf(self, s):
        _, w = half_line_rule(s)
        assert w.sum() == pytest.approx(norm.cdf(s), abs=1e-13)

    def test_rotated_halfspace_rule(self):
        a = np.array([1.0, 1.0])
        rule = halfspace_rule(a, 1.0, tangential_points=16)
        assert rule.mass == pytest.approx(norm.cdf(1.0 / math.sqrt(2.0)), abs=1e-12)
        assert np.all(rule.nodes @ a <= 1.0 + 1e-12)

    def test_householder_maps_first_axis(self):
        d = np.array([0.3, -0.4, 1.2])
        Q = householder_to(d)
        np.testing.assert_allclose(Q[:, 0], d / np.linalg.norm(d), atol=1e-15)
        np.testing.assert_allclose(Q @ Q.T, np.eye(3), atol=1e-14)

    def test_masked_monte_carlo_keeps_sample_count(self):
        model = TruncatedModel(n=2, seed=9)
        rule = masked_monte_carlo_rule(model, lambda X: X[:, 0] <= 0.0, 10000, stream=1)
        assert rule.sample_count == 10000
        assert rule.size < 10000
        estimate, stderr = rule.integrate_with_stderr(np.ones(rule.size))
        assert abs(estimate - 0.5) <= 6.0 * stderr

    def test_restrict(self):
        rule = build_quadrature(TruncatedModel(n=1), "tensor-gauss-hermite", 10)
        half = rule.restrict(rule.nodes[:, 0] < 0.0, QuadratureKind.SURFACE)
        assert half.size == 5
        assert half.mass == pytest.approx(0.5, abs=1e-14)
