"""
Verification layer: identities, oracles, integration by parts, Neumann residual,
penalization sweep and resolvent bounds.
"""

import math

import numpy as np
import pytest

from ..core.constants import (
    DYADIC_ALPHA_GRID,
    IBP_CLOSED_FORM_TOL,
    LAMBDA_SQUARED_SUM,
    LAMBDA_SQUARED_SUM_TOL,
    NEUMANN_REDUCTION,
    PENALIZATION_REDUCTION,
)
from ..core.errors import IndexRangeError, MeasureMismatchError
from ..domains.base import ConvexDomain
from ..domains.ellipsoid import EllipsoidDomain
from ..domains.halfspace import HalfspaceDomain
from ..prox.checks import EnvelopeSeries, envelope_convergence_series
from ..prox.potential import QuadraticPotential, ZeroPotential, central_difference
from ..solver.density import build_density
from ..solver.galerkin import solve_problem
from ..solver.hermite import hermite_function
from ..solver.rhs import ConstantForcing, HermiteForcing
from ..verify import (
    compare_with_oracles,
    finite_difference_oracle,
    gradient_limit_excess,
    half_line_derivative,
    half_line_solution,
    ibp_check,
    ibp_random_cases,
    identities,
    neumann_residual,
    neumann_series,
    penalization_sweep,
    projection_suite,
    prox_suite,
    random_test_function,
    sobolev_report,
)

TENSOR = {"kind": "tensor-gauss-hermite", "resolution": 8}
HALF_LINE = {"kind": "tensor-gauss-hermite", "resolution": 64}


class TestIdentities:

    def test_hundred_terms(self):
        reports = identities(100)
        squares = reports["lambda_squared_sum"]
        assert squares.consistent
        assert squares.target == LAMBDA_SQUARED_SUM
        assert 0.0 <= squares.gap <= LAMBDA_SQUARED_SUM_TOL
        assert reports["lambda_sum"].consistent
        hs = reports["hessian_hs_norm_sq"]
        assert hs.consistent
        assert hs.target == pytest.approx(2.0 / 3.0)

    def test_single_term(self):
        squares = identities(1)["lambda_squared_sum"]
        assert squares.partial == pytest.approx(16.0 / math.pi ** 4, rel=1e-15)
        assert squares.consistent

    def test_truncation_must_be_positive(self):
        with pytest.raises(ValueError):
            identities(0)


class TestOracles:

    @pytest.mark.parametrize("x", [-4.0, -2.0, -0.7, -0.1])
    def test_closed_form_solves_the_equation(self, x):
        u = half_line_solution(x)
        du = half_line_derivative(x)
        step = 1e-5
        d2u = (half_line_derivative(x + step) - half_line_derivative(x - step)) / (2.0 * step)
        assert u - d2u + x * du == pytest.approx(x, abs=1e-7)

    def test_closed_form_derivative(self):
        x = np.array([-1.3])
        fd = central_difference(lambda t: float(half_line_solution(t[0])), x)
        assert half_line_derivative(x[0]) == pytest.approx(fd[0], abs=1e-8)

    def test_reflecting_boundary(self):
        assert half_line_derivative(0.0) == 0.0

    def test_references_agree(self):
        comparison = compare_with_oracles(half_line_solution, half_line_derivative)
        assert comparison.passed
        assert comparison.fd_vs_closed_form <= 1e-4
        assert comparison.candidate_vs_closed_form == 0.0
        assert comparison.candidate_slope_at_boundary == 0.0

    def test_finite_differences_reject_nonpositive_lambda(self):
        with pytest.raises(ValueError):
            finite_difference_oracle(lambda t: t, lam=0.0)


class TestIntegrationByParts:

    def test_half_line_closed_form(self, model1):
        result = ibp_check(model1, ZeroPotential(), HalfspaceDomain([1.0], 0.0), hermite_function(1, (0,)), 1)
        assert result.lhs == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=IBP_CLOSED_FORM_TOL)
        assert result.abs_diff <= IBP_CLOSED_FORM_TOL
        assert result.stderr == 0.0

    def test_halfspace_random_cases(self, model2):
        results = ibp_random_cases(model2, ZeroPotential(), HalfspaceDomain([1.0, 2.0], 0.5), cases=10,
                                   boundary_resolution=16)
        assert len(results) == 10
        assert all(r.passed() for r in results)
        assert results[0].config_id == "halfspace-n2-0"

    def test_ellipsoid_polar_case(self, model2):
        domain = EllipsoidDomain.from_model(model2, r=0.5)
        phi = random_test_function(2, np.random.default_rng(5))
        result = ibp_check(model2, ZeroPotential(), domain, phi, 2, resolution=64, boundary_resolution=128)
        assert result.stderr == 0.0
        assert result.abs_diff <= 1e-8

    def test_ellipsoid_random_cases_with_weight(self, model2):
        weight = QuadraticPotential(np.diag([0.5, 1.0]))
        results = ibp_random_cases(model2, weight, EllipsoidDomain.from_model(model2, r=1.0), cases=8,
                                   boundary_resolution=128, resolution=64)
        assert all(r.stderr == 0.0 for r in results)
        assert all(r.passed() for r in results), [r.abs_diff for r in results]

    def test_axis_out_of_range(self, model2):
        with pytest.raises(IndexRangeError):
            ibp_check(model2, ZeroPotential(), HalfspaceDomain([1.0, 0.0]), hermite_function(2, (0, 0)), 3)


class TestNeumann:

    def test_constant_solution_has_no_flux(self, model2):
        report = neumann_series(model2, ZeroPotential(), HalfspaceDomain([1.0, 1.0], 0.3), ConstantForcing(2.0),
                                1.0, [2, 4], TENSOR, boundary_resolution=16)
        assert [d for d, _ in report.degree_series] == [2, 4]
        assert report.residual <= 1e-10
        assert report.meets_reduction() or report.residuals[0] <= 1e-10

    def test_whole_space_solution_crosses_boundary(self, model1):
        # u = x / 2 for f = h_1, lambda = 1; the flux through {x = 0} is 1/2
        sol = solve_problem(model1, build_density("whole-space", ZeroPotential()), HermiteForcing([1]), 1.0, 3,
                            TENSOR)
        report = neumann_residual(sol, HalfspaceDomain([1.0], 0.0), ZeroPotential())
        assert report.residual == pytest.approx(0.5 * (2.0 * math.pi) ** -0.25, rel=1e-9)

    def test_needs_a_degree(self, model1):
        with pytest.raises(ValueError):
            neumann_series(model1, ZeroPotential(), HalfspaceDomain([1.0]), ConstantForcing(), 1.0, [], TENSOR)

    def test_half_line_series_decreases(self, model1):
        report = neumann_series(model1, ZeroPotential(), HalfspaceDomain([1.0], 0.0), HermiteForcing([1]), 1.0,
                                [4, 8, 12], HALF_LINE, boundary_resolution=16)
        residuals = report.residuals
        assert all(b < a for a, b in zip(residuals, residuals[1:])), residuals
        assert report.meets_reduction(NEUMANN_REDUCTION)
        assert report.stderr == 0.0

    def test_half_line_residual_is_boundary_slope(self, model1):
        density = build_density("domain-direct", ZeroPotential(), HalfspaceDomain([1.0], 0.0))
        sol = solve_problem(model1, density, HermiteForcing([1]), 1.0, 8, HALF_LINE)
        slope = sol.expansion.gradient(np.zeros(1))[0]
        report = neumann_residual(sol, HalfspaceDomain([1.0], 0.0), ZeroPotential())
        assert report.residual == pytest.approx(abs(slope) * (2.0 * math.pi) ** -0.25, rel=1e-12)


class TestPenalization:

    def test_constant_forcing_sweep(self, model1):
        sweep = penalization_sweep(
            model1, ZeroPotential(), HalfspaceDomain([1.0], 0.0), ConstantForcing(1.0), 1.0, [1.0, 0.1],
            {"degree": 3, "quadrature": {"kind": "tensor-gauss-hermite", "resolution": 32}},
        )
        assert max(sweep.distances) <= 1e-9
        assert len(sweep.rows()) == 2
        for report in sweep.reports:
            assert report.ratio_u == pytest.approx(1.0, rel=1e-9)
        assert sweep.direct_report.ratio_u == pytest.approx(1.0, rel=1e-9)

    def test_alpha_grid_must_decrease(self, model1):
        with pytest.raises(ValueError):
            penalization_sweep(model1, ZeroPotential(), HalfspaceDomain([1.0]), ConstantForcing(), 1.0,
                               [0.1, 1.0], {"degree": 2})

    def test_half_line_distances_strictly_decrease(self, model1):
        sweep = penalization_sweep(model1, ZeroPotential(), HalfspaceDomain([1.0], 0.0), HermiteForcing([1]),
                                   1.0, [1.0, 0.1, 0.01], {"degree": 12, "quadrature": HALF_LINE})
        assert sweep.strictly_decreasing, sweep.distances
        assert sweep.distances[-1] > 0.0
        assert 0.0 < sweep.empirical_rate < 1.0

    def test_half_line_reduction_on_default_grid(self, model1):
        sweep = penalization_sweep(model1, ZeroPotential(), HalfspaceDomain([1.0], 0.0), HermiteForcing([1]),
                                   1.0, [1.0, 0.3, 0.1, 0.03, 0.01], {"degree": 12, "quadrature": HALF_LINE})
        assert sweep.strictly_decreasing, sweep.distances
        # an independent finite-difference solve of both problems gives 0.184675
        assert sweep.reduction == pytest.approx(0.1847, abs=1e-3)
        assert sweep.meets_reduction(PENALIZATION_REDUCTION)
        assert not sweep.meets_reduction(0.1)
        assert sweep.empirical_rate == pytest.approx(0.37, abs=0.1)


class TestSobolev:

    def test_ornstein_uhlenbeck_ratios(self, model2):
        lam = 1.5
        sol = solve_problem(model2, build_density("whole-space", ZeroPotential()), HermiteForcing((2, 1)), lam, 5,
                            TENSOR)
        report = sobolev_report(sol)
        assert report.ratio_u == pytest.approx(lam / (lam + 3.0), rel=1e-9)
        assert report.ratio_grad == pytest.approx(math.sqrt(3.0 * lam) / (lam + 3.0), rel=1e-9)
        assert report.ratio_hess == pytest.approx(math.sqrt(3.0) / (lam + 3.0), rel=1e-9)
        assert report.violations() == []
        assert not report.stochastic

    def test_foreign_measure_rejected(self, model2):
        sol = solve_problem(model2, build_density("whole-space", ZeroPotential()), HermiteForcing((1,)), 1.0, 2,
                            TENSOR)
        with pytest.raises(MeasureMismatchError):
            sobolev_report(sol, density=build_density("whole-space", ZeroPotential()))
        with pytest.raises(MeasureMismatchError):
            sobolev_report(sol, domain=HalfspaceDomain([1.0, 0.0]))


class TestSuites:

    def test_ellipsoid_projection_suite(self):
        report = projection_suite(EllipsoidDomain([1.0, 0.25], r=1.0), np.random.default_rng(6), cases=30,
                                  membership_samples=2000)
        assert report.passed, report.failures()
        assert {c.name for c in report.checks} >= {"variational_inequality", "projection_lipschitz",
                                                   "projection_monotone", "offset_lipschitz", "offset_monotone"}

    def test_projection_suite_covers_offset_properties(self):
        report = projection_suite(HalfspaceDomain([1.0, 2.0], 0.5), np.random.default_rng(8), cases=30,
                                  membership_samples=1000)
        assert report.passed, report.failures()
        checks = {c.name: c for c in report.checks}
        assert {"idempotence", "offset_lipschitz", "offset_monotone", "distance_sq_convex"} <= set(checks)
        # the halfspace offset is a rank-one linear map outside, zero inside
        assert checks["offset_lipschitz"].worst <= 1.0 + 1e-12
        assert checks["offset_monotone"].worst >= -1e-12

    def test_expanding_projector_fails_offset_monotonicity(self):
        doubling = ConvexDomain(
            2,
            g_value=lambda x: float(x @ x) - 1.0,
            g_grad=lambda x: 2.0 * x,
            g_hess=lambda x: 2.0 * np.eye(2),
            projector=lambda x: 2.0 * x,
            name="doubling",
        )
        report = projection_suite(doubling, np.random.default_rng(2), cases=10, membership_samples=100)
        failed = {f["criterion"] for f in report.failures()}
        assert "projection.offset_monotone" in failed
        assert "projection.projection_lipschitz" in failed

    def test_prox_suite_covers_lipschitz_and_inclusion(self):
        report = prox_suite(QuadraticPotential(np.diag([2.0, 0.5])), 2, np.random.default_rng(9), cases=20)
        assert report.passed, report.failures()
        checks = {c.name: c for c in report.checks}
        assert {"prox_lipschitz", "gradient_norm_monotone_in_alpha", "gradient_norm_below_potential",
                "subdifferential_inclusion", "envelope_grad_norm_converges"} <= set(checks)
        # P(x) = -alpha (I + alpha Q)^{-1} Q x contracts
        assert checks["prox_lipschitz"].worst < 1.0
        assert checks["envelope_grad_norm_converges"].detail["gap"] > 0.0

    def test_gradient_limit_excess_rejects_a_stalled_gradient(self):
        U = QuadraticPotential(1.5)
        x = np.array([1.0, -2.0])
        series = envelope_convergence_series(U, x, DYADIC_ALPHA_GRID)
        # |grad f_alpha| = 1.5 |x| / (1 + 1.5 alpha): the gap halves with alpha
        assert gradient_limit_excess(series) <= 0.0
        gap = series.potential_grad_norm - series.grad_norms[-1]
        assert gap == pytest.approx(1.5 * 1.5 * math.sqrt(5.0) * DYADIC_ALPHA_GRID[-1]
                                    / (1.0 + 1.5 * DYADIC_ALPHA_GRID[-1]), rel=1e-8)

        stalled = EnvelopeSeries(alphas=series.alphas, values=series.values,
                                 grad_norms=[0.0] * len(series.alphas),
                                 potential_value=series.potential_value,
                                 potential_grad_norm=series.potential_grad_norm)
        assert gradient_limit_excess(stalled) > 1e-3
        with pytest.raises(ValueError):
            gradient_limit_excess(EnvelopeSeries([1.0], [0.0], [0.0], 0.0, 0.0))
