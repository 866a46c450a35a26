import math

import numpy as np
import pytest

import commot


def test_binary_matches_closed_form():
    problem = commot.Problem.binary(0.5)
    for D in (0.05, 0.1, 0.25, 0.4):
        sol = commot.solve(problem, D)
        assert sol["converged"]
        assert abs(sol["rate"] - commot.analytic_rd_binary(0.5, D)) < 1e-6
        assert abs(sol["lambda"] - math.log((1 - D) / D)) < 1e-3


def test_solution_is_a_feasible_law():
    problem = commot.Problem(np.array([0.2, 0.5, 0.3]), np.array([[0.0, 1.0], [1.0, 0.0], [0.5, 0.5]]))
    sol = commot.solve(problem, 0.3, max_iter=5000)
    w = np.asarray(sol["w"])
    assert np.allclose(w.sum(axis=1), 1.0, atol=1e-9)
    assert abs(np.asarray(sol["r"]).sum() - 1.0) < 1e-9
    assert abs(sol["distortion"] - 0.3) < 1e-8


def test_gaussian_slope():
    sol = commot.solve(commot.Problem.gaussian(), 1.0)
    assert abs(sol["lambda"] - 0.5) < 1e-3


def test_trace_is_recorded_on_request():
    sol = commot.solve(commot.Problem.binary(0.3), 0.1, trace=True)
    assert len(sol["trace"]) == sol["iterations"]
    assert sol["trace"][-1].max() == sol["residuals"].max()


def test_ba_agrees_with_as():
    problem = commot.Problem.binary(0.5)
    ba = commot.ba_search(problem, 0.4, slope_tol=1e-11, tol=1e-13)
    sol = commot.solve(problem, 0.4)
    assert ba["converged"]
    assert abs(ba["rate"] - sol["rate"]) < 1e-7
    assert 10 <= ba["search_steps"] <= 200


def test_ba_fixed_slope_zero_gives_zero_rate():
    res = commot.ba_fixed_slope(commot.Problem.binary(0.5), 0.0)
    assert abs(res["rate"]) < 1e-12


def test_invalid_problem_raises():
    with pytest.raises(commot.InvalidProblem):
        commot.Problem(np.array([0.5, 0.6]), np.eye(2))
    fixed = commot.Problem(np.array([0.5, 0.6]), np.eye(2), renormalize=True)
    assert abs(np.asarray(fixed.p).sum() - 1.0) < 1e-15


def test_bad_distortion_raises():
    with pytest.raises(commot.DomainError):
        commot.solve(commot.Problem.binary(0.5), -1.0)
    with pytest.raises(commot.TargetUnreachable):
        commot.ba_search(commot.Problem.binary(0.5), 0.7)


def test_bifurcation_curve_has_one_segment():
    problem = commot.Problem.bifurcation()
    D = list(np.linspace(0.05, 0.30, 26))
    rows = commot.curve(problem, D, max_iter=20000)
    segs = commot.linear_segments(D, [r["rate"] for r in rows])
    assert len(segs) == 1
    start, end, _ = segs[0]
    assert abs(start - 0.14) <= 0.02 and abs(end - 0.25) <= 0.02


def test_problem_json_round_trip(tmp_path):
    problem = commot.Problem.laplacian(2.0, 0.5)
    path = str(tmp_path / "lap.json")
    problem.to_json(path)
    again = commot.Problem.from_json(path)
    assert np.array_equal(np.asarray(again.d), np.asarray(problem.d))
    assert np.array_equal(np.asarray(again.p), np.asarray(problem.p))
