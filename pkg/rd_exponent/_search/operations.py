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

from typing import Tuple, Union

from rd_exponent._engine import SolverConfig, TiltParams
from rd_exponent._probability import Problem

from .common import (
    CutoffResult,
    ExponentResult,
    OperatingPoint,
    RdApproxResult,
    SearchConfig,
)
from .manager import ExponentSolver


def g_mu_lambda(
    problem: Problem,
    point: OperatingPoint,
    tilt: TiltParams,
    solver_config: Union[SolverConfig, None] = None,
) -> float:
    return ExponentSolver(problem, solver_config).g_mu_lambda(point, tilt)


def g_lambda(
    problem: Problem,
    point: OperatingPoint,
    lam: float,
    solver_config: Union[SolverConfig, None] = None,
    search_config: Union[SearchConfig, None] = None,
) -> Tuple[float, float]:
    return ExponentSolver(problem, solver_config, search_config).g_lambda(point, lam)


def exponent(
    problem: Problem,
    point: OperatingPoint,
    solver_config: Union[SolverConfig, None] = None,
    search_config: Union[SearchConfig, None] = None,
) -> ExponentResult:
    return ExponentSolver(problem, solver_config, search_config).exponent(point)


def cutoff_rate(
    problem: Problem,
    delta: float,
    lam: float,
    solver_config: Union[SolverConfig, None] = None,
    search_config: Union[SearchConfig, None] = None,
) -> CutoffResult:
    return ExponentSolver(problem, solver_config, search_config).cutoff_rate(
        delta, lam
    )


def rd_approx(
    problem: Problem,
    delta: float,
    lam: float,
    solver_config: Union[SolverConfig, None] = None,
    search_config: Union[SearchConfig, None] = None,
) -> RdApproxResult:
    return ExponentSolver(problem, solver_config, search_config).rd_approx(delta, lam)
