"""
Hermite basis, assembly and the Galerkin solve.
"""

import math

import numpy as np
import pytest

from ..core.constants import EVALUATION_CHUNK, QuadratureKind
from ..core.errors import NonFiniteValueError
from ..core.model import TruncatedModel
from ..core.quadrature import build_quadrature
from ..domains.ellipsoid import EllipsoidDomain
from ..domains.halfspace import HalfspaceDomain
from ..prox.potential import QuadraticPotential, ZeroPotential
from ..solver import density as density_module
from ..solver.assembly import assemble, tree_reduce
from ..solver.density import build_density, build_rule, tensor_spacing
from ..solver.galerkin import solve, solve_problem
from ..solver.hermite import (
    HermiteBasis,
    HermiteExpansion,
    hermite_function,
    hermite_table,
    in_chunks,
    project_coefficients,
)
from ..solver.operator import apply_operator, strong_residual
from ..solver.rhs import CallableForcing, ConstantForcing, HermiteForcing, LinearForcing, build_forcing

TENSOR = {"kind": "tensor-gauss-hermite", "resolution": 8}


def whole_space():
    return build_density("whole-space", ZeroPotential())


class TestHermiteBasis:

    @pytest.mark.parametrize("n,degree", [(1, 6), (2, 4), (3, 4)])
    def test_size_is_binomial(self, n, degree):
        assert HermiteBasis(n, degree).size == math.comb(n + degree, degree)

    def test_graded_order(self):
        basis = HermiteBasis(2, 2)
        assert basis.indices == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
        np.testing.assert_array_equal(basis.total_degrees(), [0, 1, 1, 2, 2, 2])

    def test_index_outside_basis(self):
        basis = HermiteBasis(3, 4)
        with pytest.raises(KeyError):
            basis.index_of((5, 0, 0))
        with pytest.raises(KeyError):
            basis.index_of((1, 0))

    def test_one_dimensional_orthonormality(self):
        rule = build_quadrature(TruncatedModel(n=1), "tensor-gauss-hermite", 12)
        H = hermite_table(rule.nodes[:, 0], 8)
        np.testing.assert_allclose(H.T @ (rule.weights[:, None] * H), np.eye(9), atol=1e-12)

    def test_known_values(self):
        H = hermite_table(np.array([2.0]), 3)[0]
        np.testing.assert_allclose(H, [1.0, 2.0, 3.0 / math.sqrt(2.0), 2.0 / math.sqrt(6.0)], rtol=1e-14)

    def test_derivatives_of_product(self):
        psi = hermite_function(2, (2, 1))
        x = np.array([0.3, -1.1])
        # h_2(a) h_1(b) = (a^2 - 1) b / sqrt(2)
        np.testing.assert_allclose(psi.gradient(x), np.array([2 * 0.3 * -1.1, 0.3 ** 2 - 1.0]) / np.sqrt(2.0),
                                   rtol=1e-13)
        np.testing.assert_allclose(psi.hessian(x), np.array([[2 * -1.1, 2 * 0.3], [2 * 0.3, 0.0]]) / np.sqrt(2.0),
                                   atol=1e-14)

    def test_projection_recovers_coefficients(self):
        model = TruncatedModel(n=2)
        basis = HermiteBasis(2, 3)
        rule = build_quadrature(model, "tensor-gauss-hermite", 6)
        coeffs = project_coefficients(basis, HermiteForcing((1, 2))(rule.nodes), rule)
        expected = np.zeros(basis.size)
        expected[basis.index_of((1, 2))] = 1.0
        np.testing.assert_allclose(coeffs, expected, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            HermiteBasis(2, 2).evaluate(np.zeros((3, 3)))

    def test_chunked_evaluation_matches_single_block(self):
        basis = HermiteBasis(3, 4)
        coeffs = np.random.default_rng(2).standard_normal(basis.size)
        X = np.random.default_rng(3).standard_normal((101, 3))
        small = HermiteExpansion(basis, coeffs, chunk=7)
        whole = HermiteExpansion(basis, coeffs, chunk=1000)
        np.testing.assert_allclose(small.value_batch(X), whole.value_batch(X), rtol=0, atol=1e-13)
        np.testing.assert_allclose(small.gradient_batch(X), whole.gradient_batch(X), rtol=0, atol=1e-12)
        np.testing.assert_allclose(small.hessian_batch(X), whole.hessian_batch(X), rtol=0, atol=1e-12)
        assert small.hessian_batch(X).shape == (101, 3, 3)

    def test_in_chunks_bounds_block_size(self):
        seen = []

        def record(block):
            seen.append(block.shape[0])
            return block.sum(axis=1)

        out = in_chunks(record, np.ones((10, 2)), chunk=4)
        assert seen == [4, 4, 2]
        np.testing.assert_array_equal(out, np.full(10, 2.0))
        with pytest.raises(ValueError):
            in_chunks(record, np.ones((3, 2)), chunk=0)

    def test_projection_over_many_blocks(self):
        model = TruncatedModel(n=2)
        basis = HermiteBasis(2, 4)
        rule = build_quadrature(model, "tensor-gauss-hermite", 40)
        assert rule.size > EVALUATION_CHUNK
        coeffs = project_coefficients(basis, HermiteForcing((3, 1))(rule.nodes), rule)
        np.testing.assert_allclose(coeffs[basis.index_of((3, 1))], 1.0, atol=1e-12)
        coeffs[basis.index_of((3, 1))] = 0.0
        np.testing.assert_allclose(coeffs, 0.0, atol=1e-12)


class TestForcing:

    def test_hermite_padding(self):
        f = HermiteForcing([2], n=3)
        assert f.multi_index == (2, 0, 0)
        assert f.total_degree == 2
        np.testing.assert_allclose(f(np.array([[2.0, 5.0, -1.0]])), [3.0 / math.sqrt(2.0)])

    def test_hermite_rejects_bad_index(self):
        with pytest.raises(ValueError):
            HermiteForcing([-1])
        with pytest.raises(ValueError):
            HermiteForcing([1, 0, 0], n=2)

    def test_constant_and_linear(self):
        X = np.array([[1.0, 2.0], [0.0, -1.0]])
        np.testing.assert_array_equal(ConstantForcing(3.0)(X), [3.0, 3.0])
        np.testing.assert_array_equal(LinearForcing([1.0, -1.0], 0.5)(X), [-0.5, 1.5])

    def test_build_from_config(self):
        assert isinstance(build_forcing({"kind": "constant", "value": 2.0}, 2), ConstantForcing)
        linear = build_forcing({"kind": "linear"}, 3)
        np.testing.assert_array_equal(linear.b, [1.0, 0.0, 0.0])
        with pytest.raises(ValueError):
            build_forcing({"kind": "linear", "b": [1.0]}, 2)


class TestAssembly:

    def test_gaussian_mass_and_stiffness(self, model2):
        basis = HermiteBasis(2, 4)
        rule = build_quadrature(model2, "tensor-gauss-hermite", 6)
        system = assemble(model2, basis, whole_space(), ConstantForcing(0.0), 1.0, rule)
        np.testing.assert_allclose(system.mass, np.eye(basis.size), atol=1e-12)
        np.testing.assert_allclose(system.stiffness, np.diag(basis.total_degrees()), atol=1e-11)
        assert system.total_weight == pytest.approx(1.0, abs=1e-14)

    def test_thread_count_does_not_change_result(self, model2):
        basis = HermiteBasis(2, 3)
        rule = build_quadrature(model2, "monte-carlo", 5000, stream=1)
        density = build_density("whole-space", QuadraticPotential(0.5))
        serial = assemble(model2, basis, density, HermiteForcing([1], 2), 1.0, rule, threads=1, chunk=256)
        pooled = assemble(model2, basis, density, HermiteForcing([1], 2), 1.0, rule, threads=4, chunk=256)
        assert np.array_equal(serial.stiffness, pooled.stiffness)
        assert np.array_equal(serial.mass, pooled.mass)
        assert np.array_equal(serial.rhs, pooled.rhs)

    @pytest.mark.parametrize("lam", [0.0, -0.5])
    def test_lambda_must_be_positive(self, model1, lam):
        rule = build_quadrature(model1, "tensor-gauss-hermite", 4)
        with pytest.raises(ValueError):
            assemble(model1, HermiteBasis(1, 2), whole_space(), ConstantForcing(), lam, rule)

    def test_non_finite_forcing(self, model1):
        rule = build_quadrature(model1, "tensor-gauss-hermite", 4)
        bad = CallableForcing(lambda X: np.full(X.shape[0], np.nan))
        with pytest.raises(NonFiniteValueError):
            assemble(model1, HermiteBasis(1, 2), whole_space(), bad, 1.0, rule)

    def test_half_line_mass(self, model1):
        density = build_density("domain-direct", ZeroPotential(), HalfspaceDomain([1.0], 0.0))
        rule = build_rule(model1, density, {"kind": "tensor-gauss-hermite", "resolution": 64})
        system = assemble(model1, HermiteBasis(1, 2), density, ConstantForcing(), 1.0, rule)
        assert system.mass[0, 0] == pytest.approx(0.5, abs=1e-12)
        assert system.mass[1, 1] == pytest.approx(0.5, abs=1e-12)
        assert system.total_weight == pytest.approx(0.5, abs=1e-12)

    def test_tree_reduce_order(self):
        assert tree_reduce(["a", "b", "c", "d", "e"], lambda x, y: x + y) == "abcde"
        with pytest.raises(ValueError):
            tree_reduce([])


class TestDensity:

    def test_penalized_needs_domain_and_alpha(self):
        with pytest.raises(ValueError):
            build_density("whole-space-penalized", ZeroPotential())
        with pytest.raises(ValueError):
            build_density("whole-space-penalized", ZeroPotential(), HalfspaceDomain([1.0]), alpha=None)

    def test_penalized_ellipsoid_uses_split_rule(self, model2):
        domain = EllipsoidDomain.from_model(model2, r=1.0)
        density = build_density("whole-space-penalized", ZeroPotential(), domain, alpha=0.01)
        rule = build_rule(model2, density, {"kind": "tensor-gauss-hermite", "resolution": 32})
        assert rule.kind == QuadratureKind.ELLIPSOID_POLAR
        assert rule.mass == pytest.approx(1.0, abs=1e-8)

    def test_domain_direct_ellipsoid_is_deterministic(self, model2):
        density = build_density("domain-direct", ZeroPotential(), EllipsoidDomain.from_model(model2, r=1.0))
        rule = build_rule(model2, density, {"kind": "tensor-gauss-hermite", "resolution": 32}, mc_samples=10)
        assert not rule.is_stochastic

    def test_coarse_tensor_rule_warns(self, monkeypatch):
        messages = []
        monkeypatch.setattr(density_module.logger, "warning", lambda msg, *args: messages.append(msg % args))
        model = TruncatedModel(n=4, seed=3)
        domain = EllipsoidDomain.from_model(model, r=1.0)
        density = build_density("whole-space-penalized", ZeroPotential(), domain, alpha=0.01)
        rule = build_rule(model, density, {"kind": "tensor-gauss-hermite", "resolution": 4})
        assert rule.kind == QuadratureKind.TENSOR_GAUSS_HERMITE
        assert len(messages) == 1 and "coarse" in messages[0]

        messages.clear()
        wide = build_density("whole-space-penalized", ZeroPotential(), domain, alpha=100.0)
        build_rule(model, wide, {"kind": "tensor-gauss-hermite", "resolution": 4})
        assert messages == []

    def test_tensor_spacing_shrinks_with_resolution(self):
        assert tensor_spacing(64) < tensor_spacing(16) < tensor_spacing(8)
        assert tensor_spacing(1) == float("inf")

    def test_domain_direct_indicator(self):
        density = build_density("domain-direct", ZeroPotential(), HalfspaceDomain([1.0, 0.0], 0.0))
        np.testing.assert_array_equal(density.values(np.array([[-1.0, 3.0], [1.0, 3.0]])), [1.0, 0.0])


class TestGalerkin:

    @pytest.mark.parametrize("index", [(0, 0), (1, 0), (2, 1), (0, 3)])
    def test_hermite_forcing_is_an_eigenfunction(self, model2, index):
        lam = 1.5
        sol = solve_problem(model2, whole_space(), HermiteForcing(index, 2), lam, 5, TENSOR)
        assert sol.coefficient(index) == pytest.approx(1.0 / (lam + sum(index)), abs=1e-9)
        others = np.delete(sol.coeffs, sol.basis.index_of(index))
        assert np.abs(others).max() <= 1e-9
        assert strong_residual(sol) <= 1e-9
        assert sol.diagnostics["method"] == "cholesky"

    def test_monte_carlo_solve_is_reproducible(self, model2):
        quad = {"kind": "monte-carlo", "resolution": 4000}
        first = solve_problem(model2, whole_space(), HermiteForcing([1], 2), 1.0, 3, quad, stream=2)
        second = solve_problem(model2, whole_space(), HermiteForcing([1], 2), 1.0, 3, quad, stream=2)
        assert np.array_equal(first.coeffs, second.coeffs)

    def test_cg_branch_matches_cholesky(self, model2):
        basis = HermiteBasis(2, 4)
        rule = build_quadrature(model2, "tensor-gauss-hermite", 6)
        system = assemble(model2, basis, build_density("whole-space", QuadraticPotential(0.5)),
                          HermiteForcing([1, 1]), 1.0, rule)
        dense = solve(system)
        iterative = solve(system, dense_limit=1)
        assert iterative.diagnostics["method"] == "cg-jacobi"
        np.testing.assert_allclose(iterative.coeffs, dense.coeffs, atol=1e-8)

    def test_evaluate_shapes(self, model2):
        sol = solve_problem(model2, whole_space(), HermiteForcing([1], 2), 1.0, 3, TENSOR)
        X = model2.sample(5)
        assert isinstance(sol.evaluate(np.zeros(2)), float)
        assert sol.evaluate(X).shape == (5,)
        assert sol.evaluate(np.zeros(2), order=1).shape == (2,)
        assert sol.evaluate(X, order=2).shape == (5, 2, 2)
        with pytest.raises(ValueError):
            sol.evaluate(X, order=3)

    def test_coefficient_table_labels(self, model2):
        sol = solve_problem(model2, whole_space(), HermiteForcing([1], 2), 1.0, 1, TENSOR)
        labels = [label for label, _ in sol.coefficient_table()]
        assert labels == ["0-0", "1-0", "0-1"]
        assert dict(sol.coefficient_table())["1-0"] == pytest.approx(0.5, abs=1e-12)


class TestOperator:

    def test_drift_of_quadratic_weight(self):
        # L x_1 = -(x + grad U)_1 = -2 x_1 for U = |x|^2 / 2
        value = apply_operator(None, QuadraticPotential(1.0), hermite_function(1, (1,)), [0.7])
        assert value == pytest.approx(-1.4, rel=1e-14)

    def test_ornstein_uhlenbeck_eigenvalue(self, model2):
        psi = hermite_function(2, (2, 1))
        x = np.array([0.4, -0.9])
        assert apply_operator(model2, None, psi, x) == pytest.approx(-3.0 * psi.value(x), rel=1e-12)

    def test_dimension_mismatch(self, model2):
        with pytest.raises(ValueError):
            apply_operator(model2, None, hermite_function(1, (1,)), [0.1])
