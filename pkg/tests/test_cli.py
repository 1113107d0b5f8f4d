"""
Command handlers end to end: exit codes, artifacts and determinism.
"""

import json

import pytest

from ..__main__ import main
from ..cli.runner import run
from ..config import shipped_config

SMALL_SOLVE = [
    "model.n=2",
    "solver.degree=4",
    "solver.quadrature={kind: tensor-gauss-hermite, resolution: 6}",
]


def default_run():
    return str(shipped_config("default_run"))


class TestIdentities:

    def test_passes_and_writes_artifacts(self, lab_env, tmp_path):
        out = tmp_path / "identities"
        handler, result = run("identities", None, [], out_dir=str(out))
        assert result["exit_code"] == 0
        assert result["files"] == ["identities.csv"]
        summary = json.loads((out / "summary.json").read_text())
        assert summary["criteria"]["1"]["passed"] is True
        assert summary["artifacts"]["identities.csv"] == result["summary"]["artifacts"]["identities.csv"]
        assert "IDENTITIES" in handler.format_output(result)


class TestSolve:

    def test_small_whole_space_solve(self, lab_env, tmp_path):
        handler, result = run("solve", default_run(), SMALL_SOLVE, out_dir=str(tmp_path / "solve"))
        assert result["exit_code"] == 0, result
        criteria = result["summary"]["criteria"]
        assert criteria["2"]["passed"] and criteria["3"]["passed"]
        assert criteria["3"]["ratio_u"] == pytest.approx(0.5, rel=1e-9)
        assert criteria["3"]["hessian_checked"] is False
        assert set(result["files"]) == {"solution.csv", "sobolev.csv"}
        assert "[PASS] 3. regularity bounds" in handler.format_output(result)

    def test_repeated_runs_are_identical(self, lab_env, tmp_path):
        _, first = run("solve", default_run(), SMALL_SOLVE, out_dir=str(tmp_path / "a"))
        _, second = run("solve", default_run(), SMALL_SOLVE, out_dir=str(tmp_path / "b"))
        assert first["summary"]["artifacts"] == second["summary"]["artifacts"]
        assert (tmp_path / "a" / "solution.csv").read_bytes() == (tmp_path / "b" / "solution.csv").read_bytes()

    def test_invalid_lambda_is_an_input_error(self, lab_env, tmp_path):
        handler, result = run("solve", default_run(), ["solver.lambda=0"], out_dir=str(tmp_path / "bad"))
        assert result["exit_code"] == 1
        assert "solver.lambda must be positive, got 0" in result["errors"]
        assert handler.format_output(result).startswith("ERROR: invalid configuration")
        assert not (tmp_path / "bad").exists()


class TestChecks:

    def test_domain_commands_need_a_domain(self, lab_env, tmp_path):
        _, result = run("project-check", None, [], out_dir=str(tmp_path / "p"))
        assert result["exit_code"] == 1
        assert "needs a domain" in result["error"]

    def test_half_line_projection_suite(self, lab_env, tmp_path):
        overrides = ["verify.projection_cases=20", "verify.membership_samples=1000"]
        _, result = run("project-check", str(shipped_config("halfspace_1d")), overrides,
                        out_dir=str(tmp_path / "p"))
        assert result["exit_code"] == 0, result.get("violations")
        assert result["summary"]["criteria"]["5"]["domain"] == "halfspace"
        assert result["summary"]["results"]["nondegeneracy"]["finite"] is True

    def test_quadratic_prox_suite(self, lab_env, tmp_path):
        overrides = ["model.n=2", "weight.kind=quadratic", "verify.prox_cases=20"]
        _, result = run("prox-check", None, overrides, out_dir=str(tmp_path / "x"))
        assert result["exit_code"] == 0, result.get("violations")
        assert result["files"] == ["prox_checks.csv"]

    def test_half_line_integration_by_parts(self, lab_env, tmp_path):
        _, result = run("ibp-check", str(shipped_config("halfspace_1d")), ["verify.ibp_cases=5"],
                        out_dir=str(tmp_path / "ibp"))
        assert result["exit_code"] == 0, result.get("violations")
        assert result["summary"]["criteria"]["8"]["cases"] == 6
        rows = (tmp_path / "ibp" / "ibp.csv").read_text().splitlines()
        assert rows[0] == "config_id,lhs,rhs,abs_diff,stderr"
        assert rows[1].startswith("halfspace-n1-closed-form,")


class TestShippedConfigs:

    def test_half_line_penalization_sweep(self, lab_env, tmp_path):
        _, result = run("penalize-sweep", str(shipped_config("halfspace_1d")), [], out_dir=str(tmp_path / "s"))
        assert result["exit_code"] == 0, result.get("violations")
        entry = result["summary"]["criteria"]["6"]
        assert entry["oracle_checked"] is True
        assert entry["reduction"] == pytest.approx(0.1847, abs=1e-3)
        distances = entry["distances"]
        assert all(b < a for a, b in zip(distances, distances[1:]))
        assert (tmp_path / "s" / "oracle.csv").exists()

    def test_half_line_neumann_series(self, lab_env, tmp_path):
        _, result = run("neumann-check", str(shipped_config("halfspace_1d")), [], out_dir=str(tmp_path / "n"))
        assert result["exit_code"] == 0, result.get("violations")
        residuals = result["summary"]["criteria"]["7"]["residuals"]
        assert len(residuals) == 3
        assert all(b < a for a, b in zip(residuals, residuals[1:]))
        rows = (tmp_path / "n" / "neumann.csv").read_text().splitlines()
        assert rows[0] == "degree,residual"

    @pytest.mark.slow
    def test_ellipsoid_neumann_series(self, lab_env, tmp_path):
        _, result = run("neumann-check", str(shipped_config("ellipsoid_2d")), [], out_dir=str(tmp_path / "n"))
        assert result["exit_code"] == 0, result.get("violations")
        assert result["summary"]["results"]["neumann"]["stderr"] == 0.0

    @pytest.mark.slow
    def test_ellipsoid_penalization_sweep(self, lab_env, tmp_path):
        _, result = run("penalize-sweep", str(shipped_config("ellipsoid_2d")), [], out_dir=str(tmp_path / "s"))
        assert result["exit_code"] == 0, result.get("violations")
        distances = result["summary"]["criteria"]["6"]["distances"]
        assert all(b <= a for a, b in zip(distances, distances[1:])), distances

    @pytest.mark.slow
    def test_default_solve_reports_within_memory(self, lab_env, tmp_path):
        _, result = run("solve", default_run(), [], out_dir=str(tmp_path / "d"))
        assert result["exit_code"] == 0, result.get("violations")
        assert set(result["files"]) == {"solution.csv", "sobolev.csv"}
        assert result["summary"]["criteria"]["3"]["hessian_checked"] is True


class TestMain:

    def test_no_command(self, capsys):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 1

    def test_identities_exit_code(self, lab_env, tmp_path, capsys):
        with pytest.raises(SystemExit) as info:
            main(["identities", "--out", str(tmp_path / "m")])
        assert info.value.code == 0
        assert "spectrum identities" in capsys.readouterr().out
