"""
Example weights, growth certificates and the penalized potential.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ..core.config import WeightBlock
from ..core.errors import GrowthCertificateError
from ..core.model import TruncatedModel
from ..domains.ellipsoid import EllipsoidDomain
from ..domains.halfspace import HalfspaceDomain
from ..prox.potential import QuadraticPotential, ZeroPotential, central_difference
from ..weights import (
    PenalizedPotential,
    WeightU1,
    WeightU2,
    build_weight,
    gradient_bound_report,
    growth_certificate,
    uniform_tau,
    v_alpha_limit_series,
)

triples = st.lists(st.floats(min_value=-1.5, max_value=1.5, allow_nan=False), min_size=3, max_size=3)


class TestU1:

    @given(triples)
    def test_point_mass_reads_path_value(self, x):
        model = TruncatedModel(n=3)
        w = WeightU1(model, "cosh", [(0.5, 1.0)])
        x = np.array(x)
        assert w.value(x) == pytest.approx(math.cosh(model.embed_path(x, 0.5)), rel=1e-13)

    @given(triples)
    def test_gradient_matches_finite_differences(self, x):
        w = WeightU1(TruncatedModel(n=3), "softplus", uniform_tau(16))
        x = np.array(x)
        np.testing.assert_allclose(w.gradient(x), central_difference(w.value, x), atol=1e-8)

    def test_batch_agrees_with_pointwise(self):
        w = WeightU1(TruncatedModel(n=2), "square", [(0.25, 0.5), (0.75, 0.5)])
        X = TruncatedModel(n=2, seed=3).sample(20)
        np.testing.assert_allclose(w.value_batch(X), [w.value(x) for x in X], rtol=1e-14)
        np.testing.assert_allclose(w.gradient_batch(X), [w.gradient(x) for x in X], rtol=1e-14)

    def test_negative_mass_rejected(self):
        with pytest.raises(ValueError):
            WeightU1(TruncatedModel(n=2), "cosh", [(0.5, -1.0)])

    def test_unknown_phi(self):
        with pytest.raises(ValueError):
            WeightU1(TruncatedModel(n=2), "tanh")


class TestU2:

    def test_square_is_weighted_norm(self):
        model = TruncatedModel(n=4)
        w = WeightU2(model, "square")
        x = np.array([0.5, -1.0, 2.0, 0.25])
        assert w.value(x) == pytest.approx(float(model.eigenvalues @ x ** 2), rel=1e-10)
        np.testing.assert_allclose(w.hessian(x), 2.0 * np.diag(model.eigenvalues), atol=1e-12)

    @given(triples)
    def test_cosh_gradient(self, x):
        w = WeightU2(TruncatedModel(n=3), "cosh", xi_nodes=32)
        x = np.array(x)
        np.testing.assert_allclose(w.gradient(x), central_difference(w.value, x), atol=1e-8)

    def test_growth_function_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            WeightU2(TruncatedModel(n=2), "square", growth_c=-1.0)


class TestCertificates:

    @pytest.mark.parametrize("phi", ["cosh", "square", "softplus"])
    def test_default_certificates_hold(self, phi):
        report = growth_certificate(WeightU1(TruncatedModel(n=2), phi))
        assert report.passed
        assert report.max_ratio <= 1.0

    def test_understated_constant_fails(self):
        w = WeightU1(TruncatedModel(n=2), "cosh", growth=(0.4, 1.0))
        with pytest.raises(GrowthCertificateError) as info:
            growth_certificate(w)
        assert info.value.ratio > 1.0

    def test_non_strict_reports(self):
        w = WeightU1(TruncatedModel(n=2), "cosh", growth=(0.4, 1.0))
        report = growth_certificate(w, strict=False)
        assert not report.passed
        assert report.max_ratio == pytest.approx(1.25, rel=1e-6)

    def test_u2_certificate(self):
        report = growth_certificate(WeightU2(TruncatedModel(n=2), "cosh"))
        assert report.passed
        assert report.c_l2 == pytest.approx(1.0, rel=1e-12)

    def test_other_potentials_have_no_certificate(self):
        with pytest.raises(TypeError):
            growth_certificate(QuadraticPotential(1.0))

    @pytest.mark.parametrize("weight", ["u1", "u2"])
    def test_gradient_bound(self, weight):
        model = TruncatedModel(n=3, seed=2)
        w = WeightU1(model, "cosh", uniform_tau(8)) if weight == "u1" else WeightU2(model, "cosh")
        report = gradient_bound_report(w, 2.0 * model.sample(200))
        assert report.passed
        assert report.points == 200


class TestPenalized:

    def setup_method(self):
        self.base = WeightU1(TruncatedModel(n=2), "cosh", [(0.5, 1.0)])
        self.domain = HalfspaceDomain([1.0, 0.0], 0.0)

    def test_exact_mode_inside_is_the_weight(self):
        V = PenalizedPotential(self.base, self.domain, 0.1, exact=True)
        x = np.array([-1.0, 0.5])
        assert V.value(x) == self.base.value(x)

    def test_exact_mode_outside_adds_penalty(self):
        V = PenalizedPotential(self.base, self.domain, 0.1, exact=True)
        x = np.array([2.0, 0.5])
        assert V.value(x) == pytest.approx(self.base.value(x) + 4.0 / 0.2, rel=1e-14)

    def test_gradient_outside(self):
        V = PenalizedPotential(self.base, self.domain, 0.5)
        x = np.array([1.5, -0.3])
        np.testing.assert_allclose(V.gradient(x), central_difference(V.value, x), atol=1e-5)

    def test_batch_agrees_with_pointwise(self):
        V = PenalizedPotential(self.base, EllipsoidDomain([1.0, 0.5]), 0.3)
        X = 2.0 * TruncatedModel(n=2, seed=8).sample(10)
        np.testing.assert_allclose(V.value_batch(X), [V.value(x) for x in X], rtol=1e-10)
        np.testing.assert_allclose(V.gradient_batch(X), [V.gradient(x) for x in X], atol=1e-10)

    def test_constant_weight_is_not_enveloped(self):
        V = PenalizedPotential(ZeroPotential(), self.domain, 0.5)
        assert V.smooth is V.base

    def test_limit_inside_tends_to_weight(self):
        x = np.array([-0.5, 0.2])
        series = v_alpha_limit_series(self.base, self.domain, x, [1.0, 0.1, 0.01, 1e-4])
        values = [v for _, v in series]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        assert values[-1] == pytest.approx(self.base.value(x), abs=1e-3)

    def test_limit_outside_diverges(self):
        series = v_alpha_limit_series(self.base, self.domain, np.array([1.0, 0.0]), [1.0, 0.01, 1e-4],
                                      exact=True)
        assert series[-1][1] > 1e3

    def test_alpha_must_be_positive(self):
        with pytest.raises(ValueError):
            PenalizedPotential(self.base, self.domain, 0.0)


class TestFactory:

    def test_kinds(self):
        model = TruncatedModel(n=2)
        assert isinstance(build_weight(WeightBlock(kind="zero"), model), ZeroPotential)
        assert isinstance(build_weight(WeightBlock(kind="quadratic", curvature=2.0), model), QuadraticPotential)
        assert isinstance(build_weight(WeightBlock(kind="u2", psi="cosh"), model), WeightU2)

    def test_u1_growth_override(self):
        w = build_weight(WeightBlock(kind="u1", phi="square", growth={"C": 3.0, "beta": 0.5}),
                         TruncatedModel(n=2))
        assert w.growth == (3.0, 0.5)
        assert w.tau_mass == 1.0
