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
from typing import Dict, List, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, StrictBool, model_validator

from rd_exponent._probability import JointPmf
from rd_exponent.exceptions import InvalidConfigError, InvalidTiltError


class TiltParams(BaseModel):
    """
    The tilting pair of the parametric objective.

    :param mu: Distortion multiplier, `mu >= 0`
    :type mu: float
    :param lam: Rate multiplier, `0 <= lam <= 1`
    :type lam: float
    """

    mu: float
    lam: float

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_range(self) -> "TiltParams":
        if not math.isfinite(self.mu) or self.mu < 0:
            raise InvalidTiltError(f"`mu` must be a finite value >= 0, got {self.mu}")
        if not 0.0 <= self.lam <= 1.0:
            raise InvalidTiltError(f"`lam` must lie in [0, 1], got {self.lam}")
        return self


class SolverConfig(BaseModel):
    """
    Configuration for the distribution updating iteration.

    :param tol: Stop when `-log Lambda` changes by less than this amount
    :type tol: float
    :param max_iters: Maximum number of updates
    :type max_iters: int
    :param positivity_floor: Smallest probability kept after an update
    :type positivity_floor: float
    :param record_trace: Keep the per-iteration trace in the report
    :type record_trace: bool
    :param keep_iterates: Keep every iterate in the report (memory hungry)
    :type keep_iterates: bool
    :param step_tol: When set, convergence also requires every cell of q to
        change by less than this amount in the last update
    :type step_tol: Union[float, None]
    """

    tol: float = 1e-10
    max_iters: int = 100_000
    positivity_floor: float = 1e-300
    record_trace: StrictBool = True
    keep_iterates: StrictBool = False
    step_tol: Union[float, None] = None

    @model_validator(mode="after")
    def _check_values(self) -> "SolverConfig":
        if not self.tol > 0:
            raise InvalidConfigError(f"`tol` must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise InvalidConfigError(
                f"`max_iters` must be at least 1, got {self.max_iters}"
            )
        if self.step_tol is not None and not self.step_tol > 0:
            raise InvalidConfigError(
                f"`step_tol` must be positive, got {self.step_tol}"
            )
        if not 0 < self.positivity_floor < 1e-100:
            raise InvalidConfigError(
                "`positivity_floor` must lie in (0, 1e-100),"
                f" got {self.positivity_floor}"
            )
        return self


class IterationTrace(BaseModel):
    """
    Per-iteration record of the distribution updating algorithm.

    Entry `t` holds `F(q[t], q[t])`, `-log Lambda(q[t])` and
    `D(q[t+1] || q[t])`.
    """

    t: np.ndarray
    objective: np.ndarray
    minus_log_lambda: np.ndarray
    step_kl: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def __len__(self) -> int:
        return int(self.t.shape[0])

    def chain_violation(self) -> float:
        """Largest violation of the monotone chain
        `F(q[t], q[t]) >= -log Lambda(q[t]) >= F(q[t+1], q[t+1])`.

        :return: 0 when the chain holds exactly, the worst gap otherwise
        """
        if not len(self):
            return 0.0
        first = self.minus_log_lambda - self.objective
        second = self.objective[1:] - self.minus_log_lambda[:-1]
        return float(max(first.max(initial=0.0), second.max(initial=0.0), 0.0))

    def rows(self) -> List[Dict[str, Union[int, float]]]:
        return [
            {
                "t": int(t),
                "objective": float(o),
                "minus_log_lambda": float(m),
                "step_kl": float(k),
            }
            for t, o, m, k in zip(
                self.t, self.objective, self.minus_log_lambda, self.step_kl
            )
        ]


class SolveReport(BaseModel):
    """
    The result of `solve_omega`.

    :param tilt: The tilt the problem was solved for
    :type tilt: TiltParams
    :param omega_value: `F(q, q)` at the final iterate, estimate of Omega
    :type omega_value: float
    :param minus_log_lambda: `-log Lambda` at the last update
    :type minus_log_lambda: float
    :param minimizer: The final iterate
    :type minimizer: JointPmf
    :param iterations: Number of updates performed
    :type iterations: int
    :param converged: False when `max_iters` was reached first
    :type converged: bool
    :param clamp_events: Number of cells raised to the positivity floor
    :type clamp_events: int
    :param trace: The iteration trace, when recorded
    :type trace: Union[IterationTrace, None]
    :param iterates: Every iterate `q[1], q[2], ...`, when requested
    :type iterates: Union[List[np.ndarray], None]
    """

    tilt: TiltParams
    omega_value: float
    minus_log_lambda: float
    minimizer: JointPmf
    iterations: int
    converged: bool
    clamp_events: int = 0
    trace: Union[IterationTrace, None] = None
    iterates: Union[List[np.ndarray], None] = None

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def rate_bound(self) -> Union[float, None]:
        """Largest `T * (-log Lambda(q[T]) - omega_value)` along the trace.

        Bounded by `D(q* || q[1])` when the iteration converged.
        """
        if self.trace is None or not len(self.trace):
            return None
        gaps = self.trace.minus_log_lambda - self.omega_value
        return float(np.max(self.trace.t * gaps))
