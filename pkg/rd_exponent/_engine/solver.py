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
from typing import List, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from rd_exponent._probability import JointPmf, Problem
from rd_exponent.exceptions import DimensionMismatchError, SupportError

from .common import IterationTrace, SolveReport, SolverConfig, TiltParams
from .weights import log_tilted_update, log_weight

logger = logging.getLogger(__name__)


def _initial_log_q(
    problem: Problem,
    support: np.ndarray,
    initial: Union[JointPmf, None],
) -> np.ndarray:
    rows = int(support.sum())
    columns = problem.shape[1]
    if initial is None:
        return np.full((rows, columns), -np.log(rows * columns))

    if initial.shape != problem.shape:
        raise DimensionMismatchError(
            f"Initial distribution of shape {initial.shape} does not match"
            f" a problem of shape {problem.shape}"
        )
    if not initial.is_strictly_positive:
        raise SupportError("The initial distribution must be strictly positive")
    # Cells where P(x) = 0 are dropped, the minimizer places no mass there.
    log_q = np.log(initial.probs[support])
    return log_q - logsumexp(log_q)


def _expand(
    log_q: np.ndarray, support: np.ndarray, shape: Tuple[int, int]
) -> np.ndarray:
    full = np.zeros(shape)
    full[support] = np.exp(log_q)
    return full / full.sum()


def solve_omega(
    problem: Problem,
    tilt: TiltParams,
    config: Union[SolverConfig, None] = None,
    initial: Union[JointPmf, None] = None,
) -> SolveReport:
    """Computes `Omega(mu, lam)`, the minimum over joint distributions of
    `lam * I + D(q_X || P) + mu * E[d]`, with the distribution updating
    algorithm.

    Iterates `q <- q exp(-omega_q) / Lambda` from a strictly positive start
    until `-log Lambda` changes by less than `config.tol` between two
    consecutive updates, or `config.max_iters` updates were performed. With
    `config.step_tol` set, the cells of q must also have settled.
    Stopping on `max_iters` is not an error: the report is flagged as not
    converged.

    :param problem: The source coding problem
    :param tilt: The tilting pair
    :param config: Iteration settings, defaults to `SolverConfig()`
    :param initial: Strictly positive starting point, defaults to the
        uniform joint distribution
    :return: The solve report
    :raises SupportError: The initial distribution has a zero entry
    """
    config = config or SolverConfig()
    support = problem.source.support
    log_source = np.log(problem.source.probs[support])
    distortion = problem.distortion.d[support]
    log_floor = float(np.log(config.positivity_floor))

    log_q = _initial_log_q(problem, support, initial)

    steps: List[int] = []
    objectives: List[float] = []
    minus_log_lambdas: List[float] = []
    step_kls: List[float] = []
    iterates: List[np.ndarray] = []

    clamp_events = 0
    converged = False
    previous: Union[float, None] = None
    minus_log_lambda = float("nan")
    t = 0

    for t in range(1, config.max_iters + 1):
        unnormalized, log_lambda = log_tilted_update(
            log_q, log_source, distortion, tilt
        )
        minus_log_lambda = -log_lambda

        log_next = unnormalized - log_lambda
        if log_next.min() < log_floor:
            low = log_next < log_floor
            clamp_events += int(low.sum())
            log_next[low] = log_floor
            log_next -= logsumexp(log_next)

        if config.record_trace:
            steps.append(t)
            objectives.append(float(np.sum(np.exp(log_q) * (log_q - unnormalized))))
            minus_log_lambdas.append(minus_log_lambda)
            step_kls.append(float(np.sum(np.exp(log_next) * (log_next - log_q))))
        if config.keep_iterates:
            iterates.append(_expand(log_q, support, problem.shape))

        settled = (
            previous is not None and abs(minus_log_lambda - previous) < config.tol
        )
        if settled and config.step_tol is not None:
            step = np.max(np.abs(np.exp(log_next) - np.exp(log_q)))
            settled = bool(step < config.step_tol)
        log_q = log_next
        if settled:
            converged = True
            break
        previous = minus_log_lambda

    omega = log_weight(log_q, log_source, distortion, tilt)
    omega_value = float(np.sum(np.exp(log_q) * omega))

    if not converged:
        logger.warning(
            "Distribution updating did not converge in %d iterations"
            " (mu=%g, lam=%g, last change %g)",
            config.max_iters,
            tilt.mu,
            tilt.lam,
            abs(minus_log_lambda - previous) if previous is not None else np.nan,
        )
    if clamp_events:
        logger.warning(
            "%d cells were raised to the positivity floor %g (mu=%g, lam=%g)",
            clamp_events,
            config.positivity_floor,
            tilt.mu,
            tilt.lam,
        )
    logger.debug(
        "Solved Omega(mu=%g, lam=%g) = %.12g in %d iterations",
        tilt.mu,
        tilt.lam,
        omega_value,
        t,
    )

    trace = None
    if config.record_trace:
        trace = IterationTrace(
            t=np.array(steps, dtype=int),
            objective=np.array(objectives),
            minus_log_lambda=np.array(minus_log_lambdas),
            step_kl=np.array(step_kls),
        )

    return SolveReport(
        tilt=tilt,
        omega_value=omega_value,
        minus_log_lambda=minus_log_lambda,
        minimizer=JointPmf(probs=_expand(log_q, support, problem.shape)),
        iterations=t,
        converged=converged,
        clamp_events=clamp_events,
        trace=trace,
        iterates=iterates if config.keep_iterates else None,
    )
