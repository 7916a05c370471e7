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
import math
from typing import Callable, Iterator, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.special import entr, rel_entr

from rd_exponent._engine import TiltParams
from rd_exponent._probability import Problem, SourcePmf
from rd_exponent._search.common import OperatingPoint
from rd_exponent.exceptions import InvalidConfigError, OracleLimitError

from .rate_distortion import (
    ba_rate_distortion,
    binary_entropy,
    is_binary_hamming,
)

logger = logging.getLogger(__name__)

DEFAULT_MARGINAL_STEP = 1e-4
# Without a closed form every source grid point is a Blahut-Arimoto run.
COARSE_MARGINAL_STEP = 1e-2
MAX_SOURCE_GRID_POINTS = 10_201
DEFAULT_JOINT_STEP = 5e-3
MAX_MARGINAL_SIZE = 3
MAX_JOINT_CELLS = 4


class GridSpec(BaseModel):
    """
    Resolution of a brute-force grid over a probability simplex.

    :param step: Grid spacing, `1 / step` must be an integer
    :type step: float
    :param slack: Tolerance on the distortion constraint,
        defaults to `step * d_max`
    :type slack: Union[float, None]
    """

    step: float
    slack: Union[float, None] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_values(self) -> "GridSpec":
        if not 0 < self.step <= 0.1:
            raise InvalidConfigError(f"`step` must lie in (0, 0.1], got {self.step}")
        if abs(1.0 / self.step - round(1.0 / self.step)) > 1e-6:
            raise InvalidConfigError(f"`1 / step` must be an integer, got {self.step}")
        if self.slack is not None and self.slack < 0:
            raise InvalidConfigError(f"`slack` must be >= 0, got {self.slack}")
        return self

    @property
    def divisions(self) -> int:
        return int(round(1.0 / self.step))

    def effective_slack(self, d_max: float) -> float:
        return self.step * d_max if self.slack is None else self.slack


def _compositions(parts: int, total: int) -> np.ndarray:
    """Every vector of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        return np.array([[total]])
    if parts == 2:
        first = np.arange(total + 1)
        return np.column_stack((first, total - first))
    blocks = [
        np.column_stack(
            (np.full(total - first + 1, first), _compositions(parts - 1, total - first))
        )
        for first in range(total + 1)
    ]
    return np.vstack(blocks)


def _simplex_chunks(parts: int, divisions: int) -> Iterator[np.ndarray]:
    """Grid points of the simplex, chunked by the value of the first
    coordinate."""
    if parts == 1:
        yield np.ones((1, 1))
        return
    for first in range(divisions + 1):
        rest = _compositions(parts - 1, divisions - first)
        counts = np.column_stack((np.full(rest.shape[0], first), rest))
        yield counts / divisions


def _grid_minimum(
    problem: Problem,
    divisions: int,
    evaluate: Callable[[np.ndarray], np.ndarray],
) -> float:
    """Commutative minimum of `evaluate` over every joint grid point, each
    chunk holding tables of shape `(n, |X|, |Y|)`."""
    rows, columns = problem.shape
    best = np.inf
    for chunk in _simplex_chunks(rows * columns, divisions):
        values = evaluate(chunk.reshape(-1, rows, columns))
        best = min(best, float(np.min(values)))
    return best


def _joint_terms(
    tables: np.ndarray, problem: Problem
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    q_x = tables.sum(axis=2)
    q_y = tables.sum(axis=1)
    information = np.sum(
        rel_entr(tables, q_x[:, :, None] * q_y[:, None, :]), axis=(1, 2)
    )
    divergence = np.sum(rel_entr(q_x, problem.source.probs[None, :]), axis=1)
    distortion = np.sum(tables * problem.distortion.d[None, :, :], axis=(1, 2))
    return np.maximum(information, 0.0), divergence, distortion


def _check_joint_size(problem: Problem) -> None:
    rows, columns = problem.shape
    if rows * columns > MAX_JOINT_CELLS:
        raise OracleLimitError(
            f"The joint grid oracle supports at most {MAX_JOINT_CELLS} cells,"
            f" got a {rows}x{columns} problem"
        )


def default_marginal_step(problem: Problem) -> float:
    """The default step of `grid_gck`: `DEFAULT_MARGINAL_STEP` for binary
    Hamming problems, evaluated in closed form, and `COARSE_MARGINAL_STEP`
    otherwise."""
    if is_binary_hamming(problem):
        return DEFAULT_MARGINAL_STEP
    return COARSE_MARGINAL_STEP


def grid_gck(
    problem: Problem,
    point: OperatingPoint,
    grid: Union[GridSpec, None] = None,
) -> float:
    """
    Brute-force evaluation of
    `min over q_X of |R(delta | q_X) - R|^+ + D(q_X || P)` on a grid over
    the source simplex.

    The inner rate-distortion function is the closed form for binary
    Hamming problems and the Blahut-Arimoto oracle otherwise. The result is
    an upper bound converging to the exponent as the step shrinks.

    :param problem: The source coding problem, at most 3x3
    :param point: The operating point
    :param grid: Grid resolution, defaults to `default_marginal_step`
    :return: The grid minimum
    :raises OracleLimitError: An alphabet has more than 3 symbols, or the
        grid has more than `MAX_SOURCE_GRID_POINTS` points without a closed
        form
    """
    grid = grid or GridSpec(step=default_marginal_step(problem))
    rows, columns = problem.shape
    if rows > MAX_MARGINAL_SIZE or columns > MAX_MARGINAL_SIZE:
        raise OracleLimitError(
            f"The source grid oracle supports alphabets of at most"
            f" {MAX_MARGINAL_SIZE} symbols, got a {rows}x{columns} problem"
        )
    source = problem.source.probs

    if is_binary_hamming(problem):
        p = np.arange(grid.divisions + 1) / grid.divisions
        smallest = np.minimum(p, 1.0 - p)
        rates = np.where(
            point.delta < smallest,
            entr(smallest) + entr(1.0 - smallest) - binary_entropy(point.delta),
            0.0,
        )
        divergence = rel_entr(p, source[0]) + rel_entr(1.0 - p, source[1])
        return float(np.min(np.maximum(rates - point.rate, 0.0) + divergence))

    points = math.comb(grid.divisions + rows - 1, rows - 1)
    if points > MAX_SOURCE_GRID_POINTS:
        raise OracleLimitError(
            f"A step of {grid.step} gives {points} source grid points, at"
            f" most {MAX_SOURCE_GRID_POINTS} are evaluated with"
            " Blahut-Arimoto"
        )

    best = np.inf
    for chunk in _simplex_chunks(rows, grid.divisions):
        for q_x in chunk:
            divergence = float(np.sum(rel_entr(q_x, source)))
            if divergence >= best:
                continue
            inner = Problem(source=SourcePmf(probs=q_x), distortion=problem.distortion)
            rate = ba_rate_distortion(inner, point.delta)
            best = min(best, max(rate - point.rate, 0.0) + divergence)
    return best


def grid_joint_g(
    problem: Problem,
    point: OperatingPoint,
    grid: Union[GridSpec, None] = None,
) -> float:
    """
    Brute-force evaluation of
    `min over q of |I(q) - R|^+ + D(q_X || P)` subject to
    `E_q[d] <= delta + slack`, on a grid over the joint simplex.

    :param problem: The source coding problem, at most 4 cells
    :param point: The operating point
    :param grid: Grid resolution, defaults to a step of 5e-3
    :return: The grid minimum, `inf` when no grid point is feasible
    :raises OracleLimitError: The problem has more than 4 cells
    """
    _check_joint_size(problem)
    grid = grid or GridSpec(step=DEFAULT_JOINT_STEP)
    # Rounding of the grid coordinates must not exclude points on the boundary.
    limit = point.delta + grid.effective_slack(problem.distortion.d_max) + 1e-12

    def evaluate(tables: np.ndarray) -> np.ndarray:
        information, divergence, distortion = _joint_terms(tables, problem)
        values = np.maximum(information - point.rate, 0.0) + divergence
        return np.where(distortion <= limit, values, np.inf)

    value = _grid_minimum(problem, grid.divisions, evaluate)
    if not np.isfinite(value):
        logger.warning(
            "No feasible grid point at delta=%g with step %g", point.delta, grid.step
        )
    return value


def grid_omega(
    problem: Problem,
    tilt: TiltParams,
    grid: Union[GridSpec, None] = None,
) -> float:
    """
    Brute-force evaluation of
    `Omega(mu, lam) = min over q of lam * I(q) + D(q_X || P) + mu * E_q[d]`
    on a grid over the joint simplex.

    Every grid point is feasible, so the result is an upper bound on the
    true minimum.

    :param problem: The source coding problem, at most 4 cells
    :param tilt: The tilting pair
    :param grid: Grid resolution, defaults to a step of 5e-3
    :return: The grid minimum
    :raises OracleLimitError: The problem has more than 4 cells
    """
    _check_joint_size(problem)
    grid = grid or GridSpec(step=DEFAULT_JOINT_STEP)

    def evaluate(tables: np.ndarray) -> np.ndarray:
        information, divergence, distortion = _joint_terms(tables, problem)
        return tilt.lam * information + divergence + tilt.mu * distortion

    return _grid_minimum(problem, grid.divisions, evaluate)

