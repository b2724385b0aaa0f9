"""Smoke tests for the Python bindings.

Run via ctest (which points PYTHONPATH at the build tree) or manually:
    PYTHONPATH=build/python pytest tests/python
"""

import math

import pytest

import adaprox


def test_module_surface():
    assert adaprox.RULES == ["adapg", "bb-long", "bb-short", "martinez", "lnse", "aa"]
    assert adaprox.FAMILIES == ["lasso", "logreg", "cubic", "pnorm"]
    assert adaprox.__version__


def test_local_estimates_example():
    est = adaprox.local_estimates([2.0, 0.0], [1.0, 0.0])
    assert est["ell"] == pytest.approx(0.5, abs=1e-12)
    assert est["L"] == pytest.approx(0.5, abs=1e-12)
    assert est["c"] == pytest.approx(0.5, abs=1e-12)
    assert est["scaled_lambda"] == pytest.approx(1.0, abs=1e-12)

    scaled = adaprox.local_estimates([1.0, 1.0], [1.0, 0.0], gamma=1.0, nu=0.5)
    assert scaled["scaled_ell"] == pytest.approx(0.5 * 2**0.25, abs=1e-12)
    assert scaled["scaled_lambda"] == pytest.approx(2**-0.25, abs=1e-12)


def test_candidate_and_safeguard_examples():
    assert adaprox.adapg_candidate(1.0, 1.0, 1.0, 1.0, pi=1.0) == pytest.approx(
        math.sqrt(2.0), abs=1e-12
    )
    assert adaprox.adapg_candidate(1.0, 1.0, 1.0, 2.0, pi=1.0) == pytest.approx(
        1.0 / math.sqrt(6.0), abs=1e-12
    )
    assert adaprox.adapg_candidate(1.0, 1.0, 1.0, 1.0, pi=1.2) == pytest.approx(
        math.sqrt(11.0 / 6.0), abs=1e-12
    )

    assert adaprox.safeguarded_gamma(0.5, 2.0) == (0.5, "safe")
    assert adaprox.safeguarded_gamma(2.0, 0.5) == (0.5, "fast")
    gamma, branch = adaprox.safeguarded_gamma(1.0, math.inf)
    assert gamma == 1.0 and branch == "safe"

    assert adaprox.fixed_point_residual([1.0, 0.0], [1.0, 0.0], 0.5) == pytest.approx(
        1.0, abs=1e-12
    )


def test_solve_small_lasso():
    result = adaprox.solve("lasso", rows=10, cols=20, seed=3, tol=1e-8)
    assert result["status"] == "converged"
    assert result["iterations"] == result["gradient_evals"]
    assert result["iterations"] >= 2
    assert len(result["x"]) == 20
    assert len(result["gamma"]) == result["iterations"]
    assert result["rule"] == "adapg"
    assert result["pi"] == 1.2

    best = list(result["best_residual"])
    assert best[-1] <= 1e-8
    assert all(b2 <= b1 for b1, b2 in zip(best, best[1:]))

    again = adaprox.solve("lasso", rows=10, cols=20, seed=3, tol=1e-8)
    assert list(result["gamma"]) == list(again["gamma"])
    assert list(result["x"]) == list(again["x"])


def test_solve_with_certificate_report():
    result = adaprox.solve("lasso", rows=10, cols=20, seed=3, tol=1e-8, check=True)
    report = result["report"]
    assert report["pass"]
    assert report["p1_min_slack"] >= -1e-12
    assert report["p2_min_slack"] >= -1e-12
    assert report["rate_checked"] and report["rate_bound_holds"]
    assert report["lyapunov_checked"] and report["lyapunov_monotone"]
    assert result["optimum_objective"] <= result["objective"] + 1e-12


def test_holder_hint_flows_into_the_run():
    result = adaprox.solve("pnorm", rows=20, cols=5, seed=2, p=1.5, tol=1e-6)
    assert result["nu"] == 0.5
    assert result["status"] == "converged"

    pinned = adaprox.solve("pnorm", rows=20, cols=5, seed=2, p=1.5, tol=1e-6, nu=1.0)
    assert pinned["nu"] == 1.0


def test_errors_map_to_solver_error():
    with pytest.raises(adaprox.SolverError):
        adaprox.solve("lasso")  # synthetic without dimensions
    with pytest.raises(adaprox.SolverError):
        adaprox.solve("lasso", rows=4, cols=4, rule="newton")
    with pytest.raises(adaprox.SolverError):
        adaprox.solve("ridge", rows=4, cols=4)
    with pytest.raises(adaprox.SolverError):
        adaprox.solve("lasso", rows=4, cols=4, pi=3.0)
