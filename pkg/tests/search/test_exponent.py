import logging

import numpy as np
import pytest

from rd_exponent import (
    ExponentSolver,
    OperatingPoint,
    SearchConfig,
    SearchDiagnostics,
    TiltParams,
    exponent,
    g_lambda,
    g_mu_lambda,
    solve_omega,
    validate_problem,
)
from rd_exponent.oracle import (
    analytic_binary_hamming_rd,
    ba_rate_distortion,
    grid_gck,
)

# ln 2 - h(0.1) - 0.2, the exponent of a uniform bit at rate 0.2 and distortion 0.1
UNIFORM_EXPONENT = 0.168064
UNIFORM_RD = 0.368064


def test_g_mu_lambda_subtracts_the_operating_point(uniform_hamming, point):
    tilt = TiltParams(mu=1.3, lam=0.4)
    value = g_mu_lambda(uniform_hamming, point, tilt)
    omega = solve_omega(uniform_hamming, tilt).omega_value
    assert value == pytest.approx(omega - 0.4 * 0.2 - 1.3 * 0.1, abs=1e-9)


def test_inner_solves_are_cached(uniform_hamming):
    solver = ExponentSolver(uniform_hamming)
    diagnostics = SearchDiagnostics()
    tilt = TiltParams(mu=1.0, lam=0.5)

    first = solver.omega(tilt, diagnostics=diagnostics)
    second = solver.omega(tilt, diagnostics=diagnostics)
    looser = solver.omega(tilt, tol=1e-6, diagnostics=diagnostics)

    assert first is second is looser
    assert diagnostics.inner_solves == 1
    assert diagnostics.cache_hits == 2

    solver.omega(tilt, tol=1e-12, diagnostics=diagnostics)
    assert diagnostics.inner_solves == 2

    solver.clear_cache()
    solver.omega(tilt, diagnostics=diagnostics)
    assert diagnostics.inner_solves == 3


def test_g_mu_lambda_is_concave_in_mu(skewed_hamming, point):
    solver = ExponentSolver(skewed_hamming)
    values = np.array(
        [
            solver.g_mu_lambda(point, TiltParams(mu=mu, lam=0.5))
            for mu in np.linspace(0.0, 4.0, 9)
        ]
    )
    assert np.all(np.diff(values, 2) <= 1e-8)


def test_exponent_of_uniform_source(uniform_hamming, point, fast_search_config):
    result = exponent(uniform_hamming, point, search_config=fast_search_config)

    assert result.value == pytest.approx(UNIFORM_EXPONENT, abs=1e-5)
    assert result.lam_star == 1.0
    assert result.mu_star == pytest.approx(np.log(9.0), abs=1e-2)
    assert result.converged
    assert not result.diagnostics.mu_at_cap
    assert result.diagnostics.inner_solves > 0
    assert result.report.trace is not None


@pytest.mark.parametrize("p", [0.5, 0.8])
@pytest.mark.parametrize(
    ["rate", "delta"], [(0.1, 0.1), (0.2, 0.1), (0.05, 0.2), (0.25, 0.05)]
)
def test_exponent_matches_source_grid(fast_search_config, p, rate, delta):
    problem = validate_problem([p, 1.0 - p], [[0, 1], [1, 0]])
    point = OperatingPoint(rate=rate, delta=delta)
    result = exponent(problem, point, search_config=fast_search_config)
    reference = grid_gck(problem, point)

    assert result.value >= 0.0
    assert result.value == pytest.approx(reference, abs=1e-3)


def test_ternary_exponent_is_below_the_source_bound(
    ternary_problem, fast_search_config
):
    point = OperatingPoint(rate=0.2, delta=0.2)
    result = exponent(ternary_problem, point, search_config=fast_search_config)
    # q_X = P is feasible in the minimization over source types
    bound = max(ba_rate_distortion(ternary_problem, 0.2) - 0.2, 0.0)

    assert 0.0 <= result.value <= bound + 1e-6


def test_exponent_is_zero_above_the_rate_distortion_function(
    uniform_hamming, fast_search_config
):
    point = OperatingPoint(rate=UNIFORM_RD + 0.1, delta=0.1)
    result = exponent(uniform_hamming, point, search_config=fast_search_config)
    assert result.value >= 0.0
    assert result.value == pytest.approx(0.0, abs=1e-9)
    assert result.lam_star == 0.0


def test_exponent_is_zero_at_large_distortion(skewed_hamming, fast_search_config):
    point = OperatingPoint(rate=0.05, delta=skewed_hamming.distortion.d_max)
    result = exponent(skewed_hamming, point, search_config=fast_search_config)
    assert result.value == pytest.approx(0.0, abs=1e-7)


def test_exponent_at_zero_distortion_hits_the_cap(uniform_hamming, caplog):
    config = SearchConfig(mu_tol=1e-2, lambda_tol=1e-2, mu_cap=8.0)
    point = OperatingPoint(rate=0.2, delta=0.0)
    with caplog.at_level(logging.WARNING):
        result = exponent(uniform_hamming, point, search_config=config)

    assert result.diagnostics.mu_at_cap
    assert result.diagnostics.bracket_expansions > 0
    assert "bracket cap" in caplog.text
    # ln 2 - ln(1 + exp(-8)) - 0.2
    assert result.value == pytest.approx(0.492812, abs=1e-3)


GRID_RATES = [0.0, 0.03, 0.06, 0.09, 0.12]
GRID_DELTAS = [0.02, 0.04, 0.06, 0.08, 0.10]
SHAPE_SLACK = 2e-3


@pytest.fixture(scope="module")
def skewed_exponent_grid():
    problem = validate_problem([0.8, 0.2], [[0, 1], [1, 0]])
    solver = ExponentSolver(
        problem, search_config=SearchConfig(mu_tol=1e-3, lambda_tol=1e-3)
    )
    return np.array(
        [
            [
                solver.exponent(OperatingPoint(rate=rate, delta=delta)).value
                for rate in GRID_RATES
            ]
            for delta in GRID_DELTAS
        ]
    )


def test_exponent_is_convex_in_the_rate(skewed_exponent_grid):
    for row in skewed_exponent_grid:
        midpoints = row[:-2] + row[2:] - 2.0 * row[1:-1]
        assert np.all(midpoints >= -SHAPE_SLACK)


def test_exponent_is_nonincreasing_and_lipschitz_in_the_rate(skewed_exponent_grid):
    steps = np.diff(skewed_exponent_grid, axis=1)
    assert np.all(steps <= SHAPE_SLACK)
    assert np.all(np.abs(steps) <= np.diff(GRID_RATES)[0] + SHAPE_SLACK)


def test_exponent_is_nonincreasing_in_distortion(skewed_exponent_grid):
    assert np.all(skewed_exponent_grid >= 0.0)
    assert np.all(np.diff(skewed_exponent_grid, axis=0) <= SHAPE_SLACK)


def test_supporting_line(uniform_hamming, point, fast_search_config):
    solver = ExponentSolver(uniform_hamming, search_config=fast_search_config)
    line = solver.supporting_line(point, 0.5)

    # The line 0.5 * (R(delta) - R)
    assert line.value == pytest.approx(0.5 * (UNIFORM_RD - 0.2), abs=1e-5)
    assert line.intercept == pytest.approx(UNIFORM_RD, abs=1e-4)
    assert line.at(0.3) == pytest.approx(0.5 * (UNIFORM_RD - 0.3), abs=1e-5)
    assert line.value <= solver.exponent(point).value + 1e-6


def test_supporting_line_without_rate_multiplier(uniform_hamming, point):
    line = ExponentSolver(uniform_hamming).supporting_line(point, 0.0)
    assert line.intercept is None
    assert line.value == pytest.approx(0.0, abs=1e-9)


def test_g_lambda_is_below_the_exponent(skewed_hamming, fast_search_config):
    point = OperatingPoint(rate=0.1, delta=0.1)
    best = exponent(skewed_hamming, point, search_config=fast_search_config).value
    for lam in [0.0, 0.25, 0.5, 0.75, 1.0]:
        value, mu_star = g_lambda(
            skewed_hamming, point, lam, search_config=fast_search_config
        )
        assert value <= best + 1e-6
        assert mu_star >= 0.0


def test_supporting_lines_lie_below_the_exponent(skewed_hamming, rng):
    config = SearchConfig(lambda_tol=1e-3)
    solver = ExponentSolver(skewed_hamming, search_config=config)
    for _ in range(20):
        point = OperatingPoint(
            rate=rng.uniform(0.0, 0.12), delta=rng.uniform(0.02, 0.1)
        )
        lam = rng.uniform(0.05, 1.0)
        result = solver.exponent(point)

        value, _ = solver.g_lambda(point, lam)
        assert value <= result.value + 1e-6
        at_maximizer, _ = solver.g_lambda(point, result.lam_star)
        assert at_maximizer == pytest.approx(result.value, abs=2e-4)


def test_g_lambda_above_the_rate_distortion_function_is_negative(uniform_hamming):
    # Every lam > 0 gives lam * (R(delta) - R) on a uniform bit.
    lam = 0.0024
    point = OperatingPoint(rate=UNIFORM_RD + 0.1, delta=0.1)
    value, mu_star = g_lambda(uniform_hamming, point, lam)

    assert value == pytest.approx(-lam * 0.1, abs=1e-7)
    assert mu_star == pytest.approx(lam * np.log(9.0), abs=1e-5)


@pytest.mark.parametrize("delta", np.linspace(0.02, 0.2, 10))
def test_exponent_in_the_zero_region(skewed_hamming, delta):
    point = OperatingPoint(
        rate=analytic_binary_hamming_rd(0.8, delta) + 1e-3, delta=delta
    )
    solver = ExponentSolver(skewed_hamming)
    result = solver.exponent(point)

    assert result.value == 0.0
    assert result.lam_star == 0.0
    assert result.mu_star == 0.0
    assert not result.diagnostics.mu_at_cap
    assert grid_gck(skewed_hamming, point) == pytest.approx(0.0, abs=1e-12)


def test_bracket_cap_is_reported_for_the_final_search_only(caplog):
    # Distortion 0.2 + 0.8 * Hamming: every lam > 0 has its maximizer at
    # mu / lam = ln 9 / 0.8, above the cap, while lam = 0 has it at mu = 0.
    problem = validate_problem([0.5, 0.5], [[0.2, 1.0], [1.0, 0.2]])
    config = SearchConfig(mu_tol=1e-2, lambda_tol=1e-2, mu_cap=2.5)
    point = OperatingPoint(rate=0.5, delta=0.28)
    solver = ExponentSolver(problem, search_config=config)

    with caplog.at_level(logging.WARNING):
        _, mu_star = solver.g_lambda(point, 0.5)
    assert mu_star == pytest.approx(0.5 * 2.5, abs=1e-2)
    assert "bracket cap" in caplog.text

    caplog.clear()
    with caplog.at_level(logging.WARNING):
        result = solver.exponent(point)

    assert result.lam_star == 0.0
    assert result.value == pytest.approx(0.0, abs=1e-9)
    assert result.diagnostics.bracket_expansions > 0
    assert not result.diagnostics.mu_at_cap
    assert "bracket cap" not in caplog.text
