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

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import logsumexp, rel_entr

from rd_exponent._probability import (
    JointPmf,
    Problem,
    expected_distortion,
    kl_divergence,
    marginals,
    mutual_information,
)
from rd_exponent.exceptions import DimensionMismatchError, SupportError

from .common import TiltParams


class ObjectiveTerms(BaseModel):
    """
    The three terms of `F(q, q) = lam * I + D(q_X || P) + mu * E[d]`.
    """

    rate_term: float
    divergence: float
    distortion_term: float

    model_config = ConfigDict(frozen=True)

    @property
    def total(self) -> float:
        return self.rate_term + self.divergence + self.distortion_term


def log_weight(
    log_q: np.ndarray,
    log_source: np.ndarray,
    distortion: np.ndarray,
    tilt: TiltParams,
) -> np.ndarray:
    """Tilted weight `omega_q(x, y)` of a strictly positive distribution,
    evaluated from `log q`.

    :param log_q: `log q(x, y)`, every entry finite
    :param log_source: `log P(x)`, every entry finite
    :param distortion: The distortion table
    :param tilt: The tilting pair
    :return: The table of `omega_q(x, y)`
    """
    log_q_x = logsumexp(log_q, axis=1)
    log_q_y = logsumexp(log_q, axis=0)
    return (
        (1.0 - tilt.lam) * log_q_x[:, None]
        + tilt.lam * (log_q - log_q_y[None, :])
        + tilt.mu * distortion
        - log_source[:, None]
    )


def log_normalization(log_q: np.ndarray, omega: np.ndarray) -> float:
    """`log Lambda = log E_q[exp(-omega)]` with a max-shifted sum."""
    return float(logsumexp(log_q - omega))


def log_tilted_update(
    log_q: np.ndarray,
    log_source: np.ndarray,
    distortion: np.ndarray,
    tilt: TiltParams,
) -> Tuple[np.ndarray, float]:
    """The unnormalized update `log q - omega_q` and `log Lambda`.

    `log q - omega_q` is
    `(1-lam) log q(y|x) + lam log q_Y(y) + log P(x) - mu d(x, y)`, every
    term of which is at most 0, so its exponential is summed without a
    shift. The shifted sum is only used when that sum underflows.

    :param log_q: `log q(x, y)` of a distribution, every entry finite
    :param log_source: `log P(x)`, every entry finite
    :param distortion: The distortion table
    :param tilt: The tilting pair
    :return: The table of `log q - omega_q` and `log Lambda`
    """
    q = np.exp(log_q)
    log_q_x = np.log(q.sum(axis=1))
    log_q_y = np.log(q.sum(axis=0))
    unnormalized = (
        (1.0 - tilt.lam) * (log_q - log_q_x[:, None])
        + tilt.lam * log_q_y[None, :]
        + log_source[:, None]
        - tilt.mu * distortion
    )
    total = float(np.exp(unnormalized).sum())
    if total > 0.0:
        return unnormalized, math.log(total)
    return unnormalized, float(logsumexp(unnormalized))


def _check_shape(q: JointPmf, problem: Problem) -> None:
    if q.shape != problem.shape:
        raise DimensionMismatchError(
            f"Joint distribution of shape {q.shape} does not match"
            f" a problem of shape {problem.shape}"
        )


def _positive_logs(q: JointPmf, problem: Problem) -> Tuple[np.ndarray, np.ndarray]:
    _check_shape(q, problem)
    if not q.is_strictly_positive:
        raise SupportError("The tilted weight requires a strictly positive q")
    if not np.all(problem.source.support):
        raise SupportError(
            "q places mass on source symbols with P(x) = 0,"
            " the tilted weight is infinite there"
        )
    return np.log(q.probs), np.log(problem.source.probs)


def _check_support(q: JointPmf, problem: Problem) -> None:
    _check_shape(q, problem)
    q_x, _ = marginals(q)
    if np.any((q_x > 0) & ~problem.source.support):
        raise SupportError("q places mass on source symbols with P(x) = 0")


def omega_table(q: JointPmf, problem: Problem, tilt: TiltParams) -> np.ndarray:
    """Tilted weight
    `omega(x, y) = (1-lam) log q_X(x) + lam log q(x|y) + mu d(x, y) - log P(x)`.

    :param q: A strictly positive joint distribution
    :param problem: The source coding problem
    :param tilt: The tilting pair
    :return: The weight table
    :raises SupportError: q has a zero entry or P has a zero entry
    """
    log_q, log_source = _positive_logs(q, problem)
    return log_weight(log_q, log_source, problem.distortion.d, tilt)


def normalization(q: JointPmf, problem: Problem, tilt: TiltParams) -> float:
    """Normalization factor `Lambda = E_q[exp(-omega_q)]` of the update."""
    log_q, log_source = _positive_logs(q, problem)
    omega = log_weight(log_q, log_source, problem.distortion.d, tilt)
    return float(np.exp(log_normalization(log_q, omega)))


def update_step(
    q: JointPmf,
    problem: Problem,
    tilt: TiltParams,
    positivity_floor: float = 1e-300,
) -> JointPmf:
    """One multiplicative update `q' = q exp(-omega_q) / Lambda`.

    :param q: A strictly positive joint distribution
    :param problem: The source coding problem
    :param tilt: The tilting pair
    :param positivity_floor: Entries are raised to at least this value
    :return: The updated, strictly positive distribution
    """
    log_q, log_source = _positive_logs(q, problem)
    unnormalized, log_lambda = log_tilted_update(
        log_q, log_source, problem.distortion.d, tilt
    )
    updated = np.maximum(np.exp(unnormalized - log_lambda), positivity_floor)
    return JointPmf(probs=updated / updated.sum())


def objective(q: JointPmf, problem: Problem, tilt: TiltParams) -> float:
    """`F(q, q) = E_q[omega_q]`, summed cell by cell.

    Zero entries of q are allowed and contribute nothing.

    :raises SupportError: q places mass where P(x) = 0
    """
    _check_support(q, problem)
    table = q.probs
    q_x, q_y = marginals(q)
    mass = table > 0
    rows, columns = np.nonzero(mass)
    cells = table[mass]
    omega = (
        (1.0 - tilt.lam) * np.log(q_x[rows])
        + tilt.lam * np.log(cells / q_y[columns])
        + tilt.mu * problem.distortion.d[mass]
        - np.log(problem.source.probs[rows])
    )
    return float(np.sum(cells * omega))


def objective_terms(q: JointPmf, problem: Problem, tilt: TiltParams) -> ObjectiveTerms:
    """The objective evaluated term by term from the probability functionals."""
    _check_support(q, problem)
    q_x, _ = marginals(q)
    return ObjectiveTerms(
        rate_term=tilt.lam * mutual_information(q),
        divergence=kl_divergence(q_x, problem.source),
        distortion_term=tilt.mu * expected_distortion(q, problem.distortion),
    )


def surrogate(p: JointPmf, q: JointPmf, problem: Problem, tilt: TiltParams) -> float:
    """`F(p, q) = E_q[omega_p] + D(q || p)`.

    Minimized over q by the update of p, and over p by `p = q`.

    :param p: A strictly positive joint distribution
    :param q: Any joint distribution of the same shape
    """
    omega = omega_table(p, problem, tilt)
    _check_shape(q, problem)
    return float(np.sum(q.probs * omega) + np.sum(rel_entr(q.probs, p.probs)))
