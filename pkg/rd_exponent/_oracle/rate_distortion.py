#  Copyright (c) 2024 Federico Busetti <729029+febus982@users.noreply.github.com>
#
#  Permission is hereby granted, free of charge, to any person obtaining a
#  copy of this software and associated documentation files (the "Software"),
#  to deal in the Software without restriction, including without limitation
#  the rights to use, copy, modify, merge, publish, distribute, sublicense,
#  and/or sell copies of the Software, and to permit persons to whom the
#  Software is furnished to do so, subject to the following conditions:
#
#  The above copyright notice and this permission notice shall be included in
#  all copies or substantial portions of the Software.
#
#  THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
#  IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
#  FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL
#  THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
#  LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
#  FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
#  DEALINGS IN THE SOFTWARE.

import logging
from typing import Tuple

import numpy as np
from scipy.special import entr, logsumexp

from rd_exponent._probability import Problem, mutual_information
from rd_exponent.exceptions import InvalidConfigError, InvalidDistributionError

logger = logging.getLogger(__name__)

SLOPE_CAP = 1e4
DISTORTION_TOLERANCE = 1e-9


def binary_entropy(p: float) -> float:
    """`h(p) = -p log p - (1-p) log(1-p)`, in nats."""
    return float(entr(p) + entr(1.0 - p))


def is_binary_hamming(problem: Problem) -> bool:
    """True for a binary source with the Hamming distortion."""
    return problem.shape == (2, 2) and bool(
        np.array_equal(problem.distortion.d, [[0.0, 1.0], [1.0, 0.0]])
    )


def analytic_binary_hamming_rd(p: float, delta: float) -> float:
    """Rate-distortion function of a binary source with Hamming distortion,
    `h(min(p, 1-p)) - h(delta)` below `min(p, 1-p)` and 0 above.

    :param p: Probability of the first source symbol, in (0, 1)
    :param delta: The distortion level
    :return: The rate, in nats
    """
    if not 0.0 < p < 1.0:
        raise InvalidDistributionError(f"`p` must lie in (0, 1), got {p}")
    if delta < 0:
        raise InvalidConfigError(f"`delta` must be >= 0, got {delta}")
    smallest = min(p, 1.0 - p)
    if delta >= smallest:
        return 0.0
    return binary_entropy(smallest) - binary_entropy(delta)


def _blahut_arimoto(
    log_source: np.ndarray,
    distortion: np.ndarray,
    slope: float,
    tol: float,
    max_iters: int,
) -> Tuple[np.ndarray, int]:
    """Runs the Blahut-Arimoto iteration at a fixed slope from a uniform
    reproduction distribution.

    :return: The joint distribution and the number of iterations
    """
    log_q_y = np.full(distortion.shape[1], -np.log(distortion.shape[1]))
    log_joint = np.empty_like(distortion)
    for iteration in range(1, max_iters + 1):
        log_conditional = log_q_y[None, :] - slope * distortion
        log_conditional -= logsumexp(log_conditional, axis=1, keepdims=True)
        log_joint = log_source[:, None] + log_conditional
        log_next = logsumexp(log_joint, axis=0)
        change = float(np.max(np.abs(np.exp(log_next) - np.exp(log_q_y))))
        log_q_y = log_next
        if change < tol:
            return np.exp(log_joint), iteration
    logger.warning(
        "Blahut-Arimoto did not converge in %d iterations at slope %g",
        max_iters,
        slope,
    )
    return np.exp(log_joint), max_iters


def ba_rate_distortion(
    problem: Problem,
    delta: float,
    tol: float = 1e-8,
    max_iters: int = 100_000,
) -> float:
    """Rate-distortion function `R(delta | P)` by the Blahut-Arimoto
    iteration, bisecting the slope parameter in `[0, 1e4]` until the
    expected distortion is within 1e-9 of `delta`.

    :param problem: The source coding problem
    :param delta: The distortion level
    :param tol: Accuracy of the returned rate
    :param max_iters: Iteration limit of each Blahut-Arimoto run
    :return: The rate in nats, `inf` when `delta` cannot be achieved
    """
    if delta < 0:
        raise InvalidConfigError(f"`delta` must be >= 0, got {delta}")

    support = problem.source.support
    source = problem.source.probs[support]
    distortion = problem.distortion.d[support]
    log_source = np.log(source)

    smallest = float(np.sum(source * distortion.min(axis=1)))
    if delta < smallest - DISTORTION_TOLERANCE:
        logger.warning(
            "Distortion level %g is below the smallest achievable distortion %g",
            delta,
            smallest,
        )
        return float("inf")
    if delta >= float(np.min(source @ distortion)):
        return 0.0

    inner_tol = min(tol, 1e-8) * 1e-4

    def evaluate(slope: float) -> Tuple[float, float]:
        joint, _ = _blahut_arimoto(log_source, distortion, slope, inner_tol, max_iters)
        return mutual_information(joint), float(np.sum(joint * distortion))

    lower, upper = 0.0, SLOPE_CAP
    rate, achieved = evaluate(upper)
    slope = upper
    if achieved > delta + DISTORTION_TOLERANCE:
        logger.debug(
            "Distortion %g not reached at the slope cap, got %g", delta, achieved
        )
        return rate

    while upper - lower > 1e-12 * max(1.0, upper):
        slope = 0.5 * (lower + upper)
        rate, achieved = evaluate(slope)
        if abs(achieved - delta) <= DISTORTION_TOLERANCE:
            break
        if achieved > delta:
            lower = slope
        else:
            upper = slope

    # First order correction along the curve, whose slope is -slope.
    return max(rate - slope * (delta - achieved), 0.0)
