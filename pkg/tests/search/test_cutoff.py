import logging
import math
import time

import numpy as np
import pytest

from rd_exponent import (
    ExponentSolver,
    SearchConfig,
    cutoff_rate,
    rd_approx,
    validate_problem,
)
from rd_exponent.oracle import analytic_binary_hamming_rd

UNIFORM_RD = 0.368064


@pytest.mark.parametrize("lam", [0.1, 0.5, 1.0])
def test_uniform_source_cutoff_is_the_rate_distortion_function(
    uniform_hamming, fast_search_config, lam
):
    result = cutoff_rate(uniform_hamming, 0.1, lam, search_config=fast_search_config)

    assert result.value == pytest.approx(UNIFORM_RD, abs=1e-5)
    assert result.mu_star == pytest.approx(lam * math.log(9.0), abs=1e-2)
    assert result.converged
    assert result.report.trace is not None


def test_cutoff_is_nonincreasing_in_lam(skewed_hamming, fast_search_config):
    solver = ExponentSolver(skewed_hamming, search_config=fast_search_config)
    values = [solver.cutoff_rate(0.1, lam).value for lam in [0.05, 0.2, 0.5, 1.0]]
    reference = analytic_binary_hamming_rd(0.8, 0.1)

    assert np.all(np.diff(values) <= 1e-6)
    assert np.all(np.array(values) <= reference + 1e-6)


def test_cutoff_approaches_the_rate_distortion_function(
    skewed_hamming, fast_search_config
):
    result = cutoff_rate(skewed_hamming, 0.1, 0.01, search_config=fast_search_config)
    reference = analytic_binary_hamming_rd(0.8, 0.1)
    assert abs(result.value - reference) <= 0.05


def test_cutoff_at_large_distortion_is_zero(skewed_hamming, fast_search_config):
    result = cutoff_rate(skewed_hamming, 0.5, 0.3, search_config=fast_search_config)
    assert result.value == pytest.approx(0.0, abs=1e-9)
    assert result.mu_star == 0.0


def test_cutoff_at_zero_distortion_hits_the_cap(uniform_hamming, caplog):
    config = SearchConfig(mu_cap=16.0)
    with caplog.at_level(logging.WARNING):
        result = cutoff_rate(uniform_hamming, 0.0, 1.0, search_config=config)

    assert result.diagnostics.mu_at_cap
    assert result.mu_star == pytest.approx(16.0, abs=1e-3)
    # ln 2 - ln(1 + exp(-16))
    assert result.value == pytest.approx(math.log(2.0), abs=1e-6)


def test_rd_approx_constants(uniform_hamming, fast_search_config):
    result = rd_approx(uniform_hamming, 0.1, 1e-3, search_config=fast_search_config)

    assert result.c1 == pytest.approx(1.766115, abs=1e-6)
    assert result.derivative == pytest.approx(-math.log(9.0), abs=1e-3)
    assert result.c2 == pytest.approx(2.986575, abs=1e-3)
    assert result.lam_max == pytest.approx(1 / (8 * math.log(2.0)))
    assert result.bound == pytest.approx(0.552595, abs=1e-3)
    assert result.certified
    assert result.approx == pytest.approx(UNIFORM_RD, abs=1e-4)


@pytest.mark.parametrize("delta", [0.05, 0.1, 0.15])
def test_rd_approx_is_within_the_bound(skewed_hamming, fast_search_config, delta):
    result = rd_approx(skewed_hamming, delta, 1e-3, search_config=fast_search_config)
    reference = analytic_binary_hamming_rd(0.8, delta)

    assert result.certified
    assert result.approx <= reference + 1e-6
    assert abs(result.approx - reference) <= result.bound


def test_rd_approx_outside_the_certified_range(uniform_hamming, caplog):
    with caplog.at_level(logging.WARNING):
        result = rd_approx(uniform_hamming, 0.1, 0.5)

    assert not result.certified
    assert result.bound is not None
    assert "not certified" in caplog.text


def test_rd_approx_on_a_single_symbol_alphabet():
    problem = validate_problem([1.0], [[0.0, 1.0]])
    result = rd_approx(problem, 0.5, 0.1)

    assert result.bound is None
    assert result.c1 is None
    assert not result.certified
    assert result.approx == pytest.approx(0.0, abs=1e-9)


def test_cutoff_at_small_lam_is_accurate(uniform_hamming):
    result = cutoff_rate(uniform_hamming, 0.1, 1e-3)

    assert result.value == pytest.approx(UNIFORM_RD, abs=1e-6)
    assert result.mu_star == pytest.approx(1e-3 * math.log(9.0), abs=1e-6)
    assert not result.diagnostics.mu_at_cap


def test_rd_sweep_at_small_lam(uniform_hamming):
    solver = ExponentSolver(uniform_hamming)
    started = time.perf_counter()
    results = [solver.rd_approx(delta, 1e-3) for delta in np.linspace(0.05, 0.45, 9)]
    elapsed = time.perf_counter() - started

    assert elapsed < 120.0
    for result in results:
        reference = analytic_binary_hamming_rd(0.5, result.cutoff.delta)
        assert result.certified
        assert result.approx == pytest.approx(reference, abs=1e-5)
        assert abs(result.approx - reference) <= result.bound
