import logging

import numpy as np
import pytest

from rd_exponent import (
    JointPmf,
    SolverConfig,
    TiltParams,
    kl_divergence,
    objective,
    solve_omega,
    update_step,
    validate_problem,
)
from rd_exponent.exceptions import (
    DimensionMismatchError,
    InvalidConfigError,
    SupportError,
)
from rd_exponent.oracle import GridSpec, grid_omega


@pytest.mark.parametrize(
    "options",
    [
        {"tol": 0.0},
        {"tol": -1e-3},
        {"max_iters": 0},
        {"positivity_floor": 0.0},
        {"positivity_floor": 1e-50},
        {"step_tol": 0.0},
        {"step_tol": -1e-9},
    ],
)
def test_invalid_config_raises_exception(options):
    with pytest.raises(InvalidConfigError):
        SolverConfig(**options)


def test_solve_reports_convergence(uniform_hamming, solver_config):
    report = solve_omega(uniform_hamming, TiltParams(mu=1.0, lam=0.5), solver_config)

    assert report.converged
    assert report.iterations == len(report.trace)
    assert report.clamp_events == 0
    assert report.iterates is None
    assert report.minimizer.probs.sum() == pytest.approx(1.0)
    assert report.omega_value == pytest.approx(
        objective(report.minimizer, uniform_hamming, report.tilt), abs=1e-12
    )


def test_uniform_source_minimizer_is_symmetric(uniform_hamming, solver_config):
    report = solve_omega(uniform_hamming, TiltParams(mu=2.0, lam=1.0), solver_config)
    # With lam = 1 the minimum is -log((1 + exp(-mu)) / 2).
    expected = -np.log((1.0 + np.exp(-2.0)) / 2.0)
    assert report.omega_value == pytest.approx(expected, abs=1e-9)
    probs = report.minimizer.probs
    assert probs[0, 0] == pytest.approx(probs[1, 1])
    assert probs[0, 1] == pytest.approx(probs[1, 0])


def test_monotone_chain_holds(rng, make_problem, solver_config):
    shapes = [(2, 2), (3, 3), (2, 3), (3, 2), (4, 3)]
    for index in range(50):
        problem = make_problem(rng, *shapes[index % len(shapes)])
        tilt = TiltParams(mu=rng.uniform(0, 5), lam=rng.uniform(0.05, 1))
        report = solve_omega(problem, tilt, solver_config)
        assert report.trace.chain_violation() <= 1e-12
        assert np.all(np.diff(report.trace.minus_log_lambda) <= 1e-12)
        assert np.all(report.trace.step_kl >= -1e-15)


def test_minimizer_is_a_fixed_point(rng, make_problem):
    problem = make_problem(rng, 3, 2)
    tilt = TiltParams(mu=1.5, lam=0.4)
    config = SolverConfig(tol=1e-12, step_tol=1e-12, max_iters=200_000)
    report = solve_omega(problem, tilt, config)
    updated = update_step(report.minimizer, problem, tilt)

    assert report.converged
    assert updated.probs == pytest.approx(report.minimizer.probs, abs=1e-10)


def test_step_tolerance_delays_convergence(skewed_hamming):
    tilt = TiltParams(mu=1.0, lam=0.5)
    loose = solve_omega(skewed_hamming, tilt, SolverConfig(tol=1e-6))
    strict = solve_omega(skewed_hamming, tilt, SolverConfig(tol=1e-6, step_tol=1e-12))

    assert strict.converged
    assert strict.iterations >= loose.iterations
    assert strict.omega_value <= loose.omega_value + 1e-12


def test_rate_bound_is_below_the_initial_divergence(rng, make_problem):
    problem = make_problem(rng, 2, 2)
    config = SolverConfig(tol=1e-13, keep_iterates=True)
    report = solve_omega(problem, TiltParams(mu=1.0, lam=0.5), config)

    first = report.iterates[0]
    assert first == pytest.approx(np.full((2, 2), 0.25))
    assert len(report.iterates) == report.iterations
    assert report.rate_bound <= kl_divergence(report.minimizer, first) + 1e-9

    distances = [kl_divergence(report.minimizer, q) for q in report.iterates]
    assert all(b <= a + 1e-9 for a, b in zip(distances, distances[1:]))


def test_rate_bound_needs_a_trace(uniform_hamming):
    config = SolverConfig(record_trace=False)
    report = solve_omega(uniform_hamming, TiltParams(mu=1.0, lam=0.5), config)
    assert report.trace is None
    assert report.rate_bound is None


@pytest.mark.parametrize(
    ["source", "distortion", "tilt"],
    [
        ([0.5, 0.5], [[0, 1], [1, 0]], TiltParams(mu=1.0, lam=0.5)),
        ([0.8, 0.2], [[0, 1], [1, 0]], TiltParams(mu=1.0, lam=0.5)),
        ([0.8, 0.2], [[0, 1], [1, 0]], TiltParams(mu=3.0, lam=0.2)),
        ([0.6, 0.4], [[0, 2], [1, 0]], TiltParams(mu=0.5, lam=0.9)),
        ([0.3, 0.7], [[0, 0.5], [1, 0]], TiltParams(mu=2.0, lam=0.7)),
    ],
)
def test_solve_matches_grid_search(source, distortion, tilt, solver_config):
    problem = validate_problem(source, distortion)
    report = solve_omega(problem, tilt, solver_config)
    brute_force = grid_omega(problem, tilt, GridSpec(step=5e-3))
    assert report.omega_value <= brute_force + 1e-9
    assert brute_force - report.omega_value <= 1e-3


def test_zero_distortion_multiplier_gives_zero(rng, make_problem, solver_config):
    problem = make_problem(rng, 3, 3)
    report = solve_omega(problem, TiltParams(mu=0.0, lam=0.7), solver_config)
    assert report.omega_value == pytest.approx(0.0, abs=1e-8)


def test_zero_rate_multiplier_gives_zero(rng, make_problem, solver_config):
    problem = make_problem(rng, 3, 3)
    report = solve_omega(problem, TiltParams(mu=2.0, lam=0.0), solver_config)
    assert report.omega_value == pytest.approx(0.0, abs=1e-8)


def test_zero_source_rows_get_no_mass(solver_config):
    tilt = TiltParams(mu=1.0, lam=0.5)
    padded = validate_problem([0.6, 0.4, 0.0], [[0, 1], [1, 0], [0, 1]])
    reduced = validate_problem([0.6, 0.4], [[0, 1], [1, 0]])

    report = solve_omega(padded, tilt, solver_config)
    expected = solve_omega(reduced, tilt, solver_config)

    assert np.all(report.minimizer.probs[2] == 0.0)
    assert report.minimizer.shape == (3, 2)
    assert report.omega_value == pytest.approx(expected.omega_value, abs=1e-12)


def test_initial_distribution_is_checked(uniform_hamming):
    tilt = TiltParams(mu=1.0, lam=0.5)
    with pytest.raises(SupportError):
        solve_omega(
            uniform_hamming, tilt, initial=JointPmf(probs=[[0.5, 0.0], [0.0, 0.5]])
        )
    with pytest.raises(DimensionMismatchError):
        solve_omega(uniform_hamming, tilt, initial=JointPmf(probs=[[0.5, 0.5]]))


def test_warm_start_reaches_the_same_value(uniform_hamming, solver_config):
    tilt = TiltParams(mu=1.0, lam=0.5)
    cold = solve_omega(uniform_hamming, tilt, solver_config)
    warm = solve_omega(
        uniform_hamming,
        tilt,
        solver_config,
        initial=JointPmf(probs=[[0.1, 0.2], [0.3, 0.4]]),
    )
    assert warm.omega_value == pytest.approx(cold.omega_value, abs=1e-9)


def test_iteration_limit_is_reported(skewed_hamming, caplog):
    config = SolverConfig(max_iters=2)
    with caplog.at_level(logging.WARNING):
        report = solve_omega(skewed_hamming, TiltParams(mu=1.0, lam=0.5), config)
    assert not report.converged
    assert report.iterations == 2
    assert "did not converge" in caplog.text


def test_trace_rows(uniform_hamming):
    report = solve_omega(uniform_hamming, TiltParams(mu=1.0, lam=0.5))
    rows = report.trace.rows()
    assert len(rows) == report.iterations
    assert list(rows[0]) == ["t", "objective", "minus_log_lambda", "step_kl"]
    assert rows[0]["t"] == 1
