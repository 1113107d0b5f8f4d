"""
Convex domains: projections, distances and boundary rules.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ..core.config import DomainBlock
from ..core.constants import DomainKind
from ..core.errors import CapabilityError
from ..core.model import TruncatedModel
from ..core.quadrature import build_quadrature
from ..domains.base import ConvexDomain, WholeSpaceDomain
from ..domains.ellipsoid import EllipsoidDomain, sphere_area
from ..domains.factory import build_domain, nondegeneracy_report
from ..domains.halfspace import HalfspaceDomain
from ..prox.potential import central_difference
from ..verify.suites import projection_suite

points3 = st.lists(st.floats(min_value=-6.0, max_value=6.0, allow_nan=False), min_size=3, max_size=3)


def unit_ball(n):
    return ConvexDomain(
        n,
        g_value=lambda x: float(x @ x) - 1.0,
        g_grad=lambda x: 2.0 * x,
        g_hess=lambda x: 2.0 * np.eye(n),
        projector=lambda x: x / max(1.0, float(np.linalg.norm(x))),
        test_points=[np.ones(n)],
        name="unit-ball",
    )


class TestHalfspace:

    def test_projection_closed_form(self):
        domain = HalfspaceDomain([3.0, 4.0], 5.0)
        result = domain.project(np.array([3.0, 4.0]))
        # <a, x> - c = 20, |a|^2 = 25
        np.testing.assert_allclose(result.offset, 0.8 * np.array([3.0, 4.0]))
        assert result.distance == pytest.approx(4.0)
        assert domain.g_value(result.point) == pytest.approx(0.0, abs=1e-12)

    def test_interior_point_is_fixed(self):
        domain = HalfspaceDomain([1.0, 0.0], 0.0)
        result = domain.project(np.array([-2.0, 7.0]))
        np.testing.assert_array_equal(result.point, [-2.0, 7.0])
        assert result.distance == 0.0

    def test_zero_normal_rejected(self):
        with pytest.raises(ValueError):
            HalfspaceDomain([0.0, 0.0])

    def test_from_measure_point_mass(self):
        model = TruncatedModel(n=3)
        domain = HalfspaceDomain.from_measure(model, [(1.0, 1.0)], 0.5)
        # sqrt(lambda_k) e_k(1) = (-1)^{k+1} sqrt(2 lambda_k)
        signs = np.array([1.0, -1.0, 1.0])
        np.testing.assert_allclose(domain.a, signs * np.sqrt(2.0 * model.eigenvalues), atol=1e-14)
        x = np.array([0.2, -0.1, 0.4])
        assert domain.g_value(x) == pytest.approx(model.embed_path(x, 1.0) - 0.5, abs=1e-14)

    def test_batch_agrees_with_pointwise(self):
        domain = HalfspaceDomain([1.0, -2.0, 0.5], 0.3)
        X = TruncatedModel(n=3, seed=1).sample(50)
        points, offsets = domain.project_batch(X)
        for x, p, m in zip(X, points, offsets):
            single = domain.project(x)
            np.testing.assert_allclose(single.point, p, atol=1e-14)
            np.testing.assert_allclose(single.offset, m, atol=1e-14)

    def test_boundary_rule_half_line(self):
        rule = HalfspaceDomain([1.0], 0.0).boundary_rule(8)
        assert rule.size == 1
        assert rule.mass == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-14)

    def test_boundary_rule_nodes_on_hyperplane(self):
        domain = HalfspaceDomain([1.0, 2.0, -1.0], 0.7)
        rule = domain.boundary_rule(6)
        np.testing.assert_allclose(domain.g_value_batch(rule.nodes), 0.0, atol=1e-12)
        s = domain.offset_along_normal
        assert rule.mass == pytest.approx(math.exp(-0.5 * s * s) / math.sqrt(2.0 * math.pi), rel=1e-12)


class TestEllipsoid:

    @given(points3)
    def test_projection_lands_on_boundary(self, x):
        domain = EllipsoidDomain.from_model(TruncatedModel(n=3), r=0.8)
        x = np.array(x)
        result = domain.project(x)
        if domain.g_value(x) > 0.0:
            assert abs(domain.g_value(result.point)) <= 1e-10
        else:
            np.testing.assert_array_equal(result.point, x)

    @given(points3, points3)
    def test_projection_is_nonexpansive(self, x, y):
        domain = EllipsoidDomain.from_model(TruncatedModel(n=3), r=0.8)
        x, y = np.array(x), np.array(y)
        px, py = domain.project(x).point, domain.project(y).point
        assert np.linalg.norm(px - py) <= np.linalg.norm(x - y) + 1e-9

    @given(points3)
    def test_variational_inequality(self, x):
        domain = EllipsoidDomain.from_model(TruncatedModel(n=3), r=1.0)
        residual = domain.vi_residual(np.array(x), np.random.default_rng(0), count=64)
        assert residual >= -1e-9

    def test_distance_gradient_is_twice_offset(self):
        domain = EllipsoidDomain([1.0, 0.25], r=1.0)
        x = np.array([2.0, -3.0])
        np.testing.assert_allclose(domain.grad_distance_sq(x), central_difference(domain.distance_sq, x),
                                   atol=1e-5)

    def test_semi_axes(self):
        domain = EllipsoidDomain([4.0, 1.0], r=2.0)
        np.testing.assert_allclose(domain.semi_axes, [1.0, 2.0])

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            EllipsoidDomain([1.0, -1.0])
        with pytest.raises(ValueError):
            EllipsoidDomain([1.0, 1.0], r=0.0)

    def test_circle_surface_measure(self):
        rule = EllipsoidDomain([1.0, 1.0], r=1.0).boundary_rule(64)
        assert rule.mass == pytest.approx(math.exp(-0.5), rel=1e-12)
        np.testing.assert_allclose(np.linalg.norm(rule.nodes, axis=1), 1.0, atol=1e-14)

    def test_interval_endpoints(self):
        rule = EllipsoidDomain([0.25], r=1.0).boundary_rule(8)
        np.testing.assert_allclose(np.sort(rule.nodes[:, 0]), [-2.0, 2.0])
        assert rule.mass == pytest.approx(2.0 * math.exp(-2.0) / math.sqrt(2.0 * math.pi), rel=1e-14)

    def test_sphere_area(self):
        assert sphere_area(2) == pytest.approx(2.0 * math.pi)
        assert sphere_area(3) == pytest.approx(4.0 * math.pi)

    def test_monte_carlo_boundary_needs_generator(self):
        with pytest.raises(ValueError):
            EllipsoidDomain([1.0] * 4).boundary_rule(8)

    @pytest.mark.parametrize("weight,r", [(0.25, 1.0), (1.0, 0.5), (4.0, 3.0)])
    def test_interval_volume_rule_mass(self, weight, r):
        domain = EllipsoidDomain([weight], r=r)
        rule = domain.volume_rule(TruncatedModel(n=1, seed=1), 16, 0)
        a = domain.semi_axes[0]
        assert rule.mass == pytest.approx(math.erf(a / math.sqrt(2.0)), abs=1e-12)
        assert not rule.is_stochastic
        assert np.all(np.abs(rule.nodes[:, 0]) <= a)

    def test_disc_volume_rule_mass(self):
        # P(|g| <= r) = 1 - exp(-r^2 / 2) for a standard Gaussian in the plane
        rule = EllipsoidDomain([1.0, 1.0], r=1.5).volume_rule(TruncatedModel(n=2, seed=7), 24, 0)
        assert rule.mass == pytest.approx(1.0 - math.exp(-1.125), abs=1e-12)
        assert not rule.is_stochastic

    def test_ball_volume_rule_mass(self):
        # P(|g| <= 1) in R^3 is the chi distribution with three degrees of freedom
        rule = EllipsoidDomain([1.0, 1.0, 1.0], r=1.0).volume_rule(TruncatedModel(n=3, seed=5), 12, 0)
        expected = math.erf(1.0 / math.sqrt(2.0)) - math.sqrt(2.0 / math.pi) * math.exp(-0.5)
        assert rule.mass == pytest.approx(expected, abs=1e-12)

    def test_volume_rule_is_deterministic_and_inside(self, model2):
        domain = EllipsoidDomain.from_model(model2, r=0.5)
        first = domain.volume_rule(model2, 32, 1000, stream=0)
        second = domain.volume_rule(model2, 32, 1000, stream=3)
        np.testing.assert_array_equal(first.nodes, second.nodes)
        np.testing.assert_array_equal(first.weights, second.weights)
        assert np.all(domain.g_value_batch(first.nodes) <= 1e-12)

    def test_volume_rule_agrees_with_masked_monte_carlo(self, model2):
        domain = EllipsoidDomain.from_model(model2, r=1.0)
        polar = domain.volume_rule(model2, 64, 0)
        sampled = ConvexDomain.volume_rule(domain, model2, 64, 200000)
        mass, stderr = sampled.integrate_with_stderr(np.ones(sampled.size))
        assert abs(polar.mass - mass) <= 6.0 * stderr

    def test_high_dimensional_volume_rule_is_monte_carlo(self):
        model = TruncatedModel(n=4, seed=3)
        rule = EllipsoidDomain.from_model(model, r=1.0).volume_rule(model, 8, 5000)
        assert rule.is_stochastic

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_split_rule_covers_the_whole_space(self, n):
        domain = EllipsoidDomain(np.linspace(0.5, 2.0, n), r=0.8)
        rule = domain.split_rule(24)
        assert rule.mass == pytest.approx(1.0, abs=1e-8)
        inside = domain.volume_rule(TruncatedModel(n=n, seed=1), 24, 0)
        assert rule.size == 2 * inside.size

    def test_split_rule_second_moment(self):
        rule = EllipsoidDomain([1.0, 0.25], r=1.0).split_rule(48)
        second = rule.integrate(rule.nodes[:, 0] ** 2 + rule.nodes[:, 1] ** 2)
        assert second == pytest.approx(2.0, abs=1e-8)

    def test_split_rule_capability_above_polar_dimension(self):
        with pytest.raises(CapabilityError):
            EllipsoidDomain([1.0] * 4).split_rule(8)


class TestWholeAndGeneric:

    def test_whole_space_projection_is_identity(self):
        domain = ConvexDomain.whole_space(3)
        assert isinstance(domain, WholeSpaceDomain)
        x = np.array([1.0, -2.0, 3.0])
        assert domain.distance_sq(x) == 0.0
        assert domain.contains(x)

    def test_generic_domain_has_no_boundary_rule(self):
        with pytest.raises(CapabilityError):
            unit_ball(2).boundary_rule(16)

    def test_generic_domain_rejects_degenerate_test_point(self):
        with pytest.raises(ValueError):
            ConvexDomain(1, lambda x: float(x @ x) - 1.0, lambda x: 2.0 * x, lambda x: 2.0 * np.eye(1),
                         lambda x: x, test_points=[np.zeros(1)])

    def test_generic_ball_passes_projection_suite(self):
        report = projection_suite(unit_ball(2), np.random.default_rng(3), cases=20, membership_samples=500)
        assert report.passed, report.failures()

    def test_lipschitz_probe_rejects_zero_displacement(self):
        with pytest.raises(ValueError):
            unit_ball(2).lipschitz_probe(np.ones(2), [np.zeros(2)])


class TestFactory:

    def test_none(self):
        assert build_domain(DomainBlock(kind="none"), TruncatedModel(n=2)) is None

    def test_halfspace_defaults_to_first_axis(self):
        domain = build_domain(DomainBlock(kind="halfspace", c=1.0), TruncatedModel(n=3))
        np.testing.assert_array_equal(domain.a, [1.0, 0.0, 0.0])
        assert domain.c == 1.0

    def test_halfspace_from_sigma(self):
        model = TruncatedModel(n=2)
        domain = build_domain(DomainBlock(kind="halfspace", sigma=[[0.5, 2.0]]), model)
        np.testing.assert_allclose(domain.a, 2.0 * model.scaled_basis_matrix([0.5])[0])

    def test_ellipsoid_uses_model_eigenvalues(self):
        model = TruncatedModel(n=3)
        domain = build_domain(DomainBlock(kind="ellipsoid", r=2.0), model)
        assert domain.kind == DomainKind.ELLIPSOID
        np.testing.assert_array_equal(domain.axis_weights, model.eigenvalues)

    def test_nondegeneracy_of_halfspace_is_constant(self):
        model = TruncatedModel(n=2)
        rule = build_quadrature(model, "tensor-gauss-hermite", 6)
        report = nondegeneracy_report(HalfspaceDomain([3.0, 4.0]), rule, q=1.0)
        assert report.finite
        assert report.estimate == pytest.approx(0.2, rel=1e-12)
