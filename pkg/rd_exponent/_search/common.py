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
from typing import Union

from pydantic import BaseModel, ConfigDict, model_validator

from rd_exponent._engine import SolveReport
from rd_exponent.exceptions import InvalidConfigError


class OperatingPoint(BaseModel):
    """
    A point of the rate-distortion plane.

    :param rate: The coding rate R, in nats
    :type rate: float
    :param delta: The distortion level
    :type delta: float
    """

    rate: float
    delta: float

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_values(self) -> "OperatingPoint":
        for name in ("rate", "delta"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidConfigError(
                    f"`{name}` must be a finite value >= 0, got {value}"
                )
        return self


class SearchConfig(BaseModel):
    """
    Configuration for the parametric outer search.

    :param mu_tol: Bracket width at which the search over the slope
        `mu / lam` stops (over `mu` itself when `lam = 0`)
    :type mu_tol: float
    :param lambda_tol: Bracket width at which the search over `lam` stops
    :type lambda_tol: float
    :param mu_initial_upper: Upper end of the first `mu / lam` bracket
    :type mu_initial_upper: float
    :param mu_cap: The `mu / lam` bracket is never expanded beyond this
        value, so `mu` never exceeds it either
    :type mu_cap: float
    :param expansion_trigger: The bracket is expanded when the objective
        still increases from this fraction of its upper end to the upper end
    :type expansion_trigger: float
    :param inner_tol_loose: Largest tolerance given to the inner solver,
        before the scaling by `lam`
    :type inner_tol_loose: float
    :param inner_tol_scale: Inner tolerance per unit of outer bracket width
    :type inner_tol_scale: float
    :param warm_start_mix: Weight of the uniform distribution mixed into a
        warm start, keeping it strictly positive
    :type warm_start_mix: float
    :param zero_clamp_tol: Negative exponents down to `-zero_clamp_tol`
        are reported as 0
    :type zero_clamp_tol: float
    """

    mu_tol: float = 1e-4
    lambda_tol: float = 1e-4
    mu_initial_upper: float = 1.0
    mu_cap: float = 1e4
    expansion_trigger: float = 0.99
    inner_tol_loose: float = 1e-6
    inner_tol_scale: float = 1e-5
    warm_start_mix: float = 1e-6
    zero_clamp_tol: float = 1e-9

    @model_validator(mode="after")
    def _check_values(self) -> "SearchConfig":
        for name in (
            "mu_tol",
            "lambda_tol",
            "mu_initial_upper",
            "inner_tol_loose",
            "inner_tol_scale",
        ):
            if not getattr(self, name) > 0:
                raise InvalidConfigError(
                    f"`{name}` must be positive, got {getattr(self, name)}"
                )
        if self.mu_cap < self.mu_initial_upper:
            raise InvalidConfigError("`mu_cap` must not be below `mu_initial_upper`")
        if not 0.5 < self.expansion_trigger < 1.0:
            raise InvalidConfigError(
                "`expansion_trigger` must lie in (0.5, 1),"
                f" got {self.expansion_trigger}"
            )
        if not 0 < self.warm_start_mix < 1:
            raise InvalidConfigError(
                f"`warm_start_mix` must lie in (0, 1), got {self.warm_start_mix}"
            )
        if self.zero_clamp_tol < 0:
            raise InvalidConfigError("`zero_clamp_tol` must be >= 0")
        return self


class SearchDiagnostics(BaseModel):
    """
    Counters collected during an outer search.

    :param evaluations: Objective evaluations requested by the searches
    :type evaluations: int
    :param inner_solves: Calls to the distribution updating algorithm
    :type inner_solves: int
    :param cache_hits: Evaluations answered from the solve cache
    :type cache_hits: int
    :param bracket_expansions: Number of times the `mu / lam` bracket was
        expanded
    :type bracket_expansions: int
    :param mu_at_cap: The final search over `mu / lam` ended at the bracket
        cap
    :type mu_at_cap: bool
    """

    evaluations: int = 0
    inner_solves: int = 0
    cache_hits: int = 0
    bracket_expansions: int = 0
    mu_at_cap: bool = False


class ExponentResult(BaseModel):
    """
    The correct decoding probability exponent `G(R, delta | P)`.

    :param value: The exponent, in nats
    :type value: float
    :param lam_star: The maximizing rate multiplier
    :type lam_star: float
    :param mu_star: The maximizing distortion multiplier
    :type mu_star: float
    :param point: The operating point
    :type point: OperatingPoint
    :param report: The inner solve at the maximizer
    :type report: SolveReport
    :param diagnostics: Search counters and flags
    :type diagnostics: SearchDiagnostics
    """

    value: float
    lam_star: float
    mu_star: float
    point: OperatingPoint
    report: SolveReport
    diagnostics: SearchDiagnostics

    model_config = ConfigDict(frozen=True)

    @property
    def converged(self) -> bool:
        return self.report.converged


class CutoffResult(BaseModel):
    """
    The cutoff rate `R_cut(lam)` at a distortion level.

    :param value: The cutoff rate, in nats
    :type value: float
    :param mu_star: The maximizing distortion multiplier
    :type mu_star: float
    :param lam: The rate multiplier used
    :type lam: float
    :param delta: The distortion level
    :type delta: float
    :param report: The inner solve at the maximizer
    :type report: SolveReport
    :param diagnostics: Search counters and flags
    :type diagnostics: SearchDiagnostics
    """

    value: float
    mu_star: float
    lam: float
    delta: float
    report: SolveReport
    diagnostics: SearchDiagnostics

    model_config = ConfigDict(frozen=True)

    @property
    def converged(self) -> bool:
        return self.report.converged


class RdApproxResult(BaseModel):
    """
    The cutoff rate as an approximation of the rate-distortion function,
    with the error bound `c1 * sqrt(lam) * (log(1/lam) + c2)`.

    The bound is only certified for `0 < lam <= 1 / (8 * alpha)` and a
    distortion level strictly between 0 and the largest distortion.

    :param approx: The approximation `R_cut(lam)`
    :type approx: float
    :param lam: The rate multiplier used
    :type lam: float
    :param bound: The error bound, None when it cannot be evaluated
    :type bound: Union[float, None]
    :param certified: True when the bound is guaranteed to hold
    :type certified: bool
    :param derivative: Estimate of the slope of the rate-distortion function
    :type derivative: float
    :param c1: First constant of the bound
    :type c1: Union[float, None]
    :param c2: Second constant of the bound
    :type c2: Union[float, None]
    :param lam_max: Largest rate multiplier with a certified bound
    :type lam_max: Union[float, None]
    :param cutoff: The underlying cutoff rate computation
    :type cutoff: CutoffResult
    """

    approx: float
    lam: float
    bound: Union[float, None]
    certified: bool
    derivative: float
    c1: Union[float, None]
    c2: Union[float, None]
    lam_max: Union[float, None]
    cutoff: CutoffResult

    model_config = ConfigDict(frozen=True)


class SupportingLine(BaseModel):
    """
    The supporting line of slope `-lam` to the curve `R -> G(R, delta | P)`.

    The line is `R -> G(lam)(R, delta | P)`: it touches the exponent curve
    where `lam` is the maximizing rate multiplier, and crosses the rate axis
    at the cutoff rate.

    :param lam: The rate multiplier, minus the slope
    :type lam: float
    :param mu_star: The maximizing distortion multiplier
    :type mu_star: float
    :param point: The operating point the line is evaluated at
    :type point: OperatingPoint
    :param value: `G(lam)(R, delta | P)` at `point.rate`
    :type value: float
    :param intercept: The rate where the line crosses 0, None for `lam = 0`
    :type intercept: Union[float, None]
    """

    lam: float
    mu_star: float
    point: OperatingPoint
    value: float
    intercept: Union[float, None]

    model_config = ConfigDict(frozen=True)

    def at(self, rate: float) -> float:
        """Evaluates the line at another rate."""
        return self.value - self.lam * (rate - self.point.rate)
