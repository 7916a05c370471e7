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
from typing import Callable, MutableMapping, Tuple, Union

import numpy as np
from pydantic import BaseModel

from rd_exponent._engine import SolveReport, SolverConfig, TiltParams, solve_omega
from rd_exponent._oracle.rate_distortion import ba_rate_distortion
from rd_exponent._probability import JointPmf, Problem
from rd_exponent.exceptions import InvalidConfigError, InvalidTiltError

from .common import (
    CutoffResult,
    ExponentResult,
    OperatingPoint,
    RdApproxResult,
    SearchConfig,
    SearchDiagnostics,
    SupportingLine,
)
from .golden import golden_section_maximize

logger = logging.getLogger(__name__)

TiltKey = Tuple[float, float]

# Changes of `-log Lambda` below this level are rounding noise.
TOLERANCE_FLOOR = 1e-14


class _MuSearch(BaseModel):
    value: float
    mu_star: float
    report: SolveReport
    at_cap: bool = False


class ExponentSolver:
    """
    Computes the exponent, the cutoff rate and the rate-distortion
    approximation of a single problem.

    Inner solves are cached by tilt, together with the tolerance they were
    computed with, and successive solves are warm started from the previous
    minimizer.
    """

    __cache: MutableMapping[TiltKey, Tuple[float, SolveReport]]
    __rd_cache: MutableMapping[float, float]

    def __init__(
        self,
        problem: Problem,
        solver_config: Union[SolverConfig, None] = None,
        search_config: Union[SearchConfig, None] = None,
    ) -> None:
        if not isinstance(problem, Problem):
            raise InvalidConfigError("`problem` is not a Problem object")
        if solver_config is not None and not isinstance(solver_config, SolverConfig):
            raise InvalidConfigError("`solver_config` is not a SolverConfig object")
        if search_config is not None and not isinstance(search_config, SearchConfig):
            raise InvalidConfigError("`search_config` is not a SearchConfig object")

        self.problem = problem
        self.solver_config = solver_config or SolverConfig()
        self.search_config = search_config or SearchConfig()
        self.__cache = {}
        self.__rd_cache = {}
        self.__warm_start: Union[np.ndarray, None] = None

    def clear_cache(self) -> None:
        self.__cache = {}
        self.__rd_cache = {}
        self.__warm_start = None

    def omega(
        self,
        tilt: TiltParams,
        tol: Union[float, None] = None,
        diagnostics: Union[SearchDiagnostics, None] = None,
        record_trace: bool = False,
    ) -> SolveReport:
        """
        Returns the solve report of `Omega(mu, lam)`, from the cache when a
        solve at least as accurate is available.

        :param tilt: The tilting pair
        :param tol: Stopping tolerance, defaults to the solver configuration
        :param diagnostics: Counters to update
        :param record_trace: Require a report carrying the iteration trace
        :return: The solve report
        """
        tol = self.solver_config.tol if tol is None else tol
        record_trace = record_trace and self.solver_config.record_trace
        key = (tilt.mu, tilt.lam)
        cached = self.__cache.get(key)
        if cached is not None and cached[0] <= tol:
            if not record_trace or cached[1].trace is not None:
                if diagnostics is not None:
                    diagnostics.cache_hits += 1
                return cached[1]

        config = self.solver_config.model_copy(
            update={
                "tol": tol,
                "record_trace": record_trace,
                "keep_iterates": False,
            }
        )
        report = solve_omega(
            self.problem, tilt, config=config, initial=self.__initial()
        )
        if diagnostics is not None:
            diagnostics.inner_solves += 1
        self.__cache[key] = (tol, report)
        self.__warm_start = report.minimizer.probs
        return report

    def __initial(self) -> Union[JointPmf, None]:
        if self.__warm_start is None:
            return None
        mix = self.search_config.warm_start_mix
        uniform = np.full(self.__warm_start.shape, 1.0 / self.__warm_start.size)
        start = (1.0 - mix) * self.__warm_start + mix * uniform
        return JointPmf(probs=start / start.sum())

    def __inner_tol(self, width: float, scale: float) -> float:
        config = self.search_config
        tol = min(
            config.inner_tol_loose,
            max(self.solver_config.tol, config.inner_tol_scale * width),
        )
        return max(scale * tol, TOLERANCE_FLOOR)

    def __final_tol(self, scale: float) -> float:
        return max(scale * self.solver_config.tol, TOLERANCE_FLOOR)

    def __rate_distortion(self, delta: float) -> float:
        if delta not in self.__rd_cache:
            self.__rd_cache[delta] = ba_rate_distortion(self.problem, delta)
        return self.__rd_cache[delta]

    def g_mu_lambda(self, point: OperatingPoint, tilt: TiltParams) -> float:
        """
        `G(mu, lam)(R, delta | P) = Omega(mu, lam) - lam * R - mu * delta`.

        :param point: The operating point
        :param tilt: The tilting pair
        :return: The parametric exponent
        """
        report = self.omega(tilt, self.__final_tol(tilt.lam or 1.0))
        return report.omega_value - tilt.lam * point.rate - tilt.mu * point.delta

    def __maximize_slope(
        self,
        function: Callable[[float, float], float],
        diagnostics: SearchDiagnostics,
    ) -> Tuple[float, bool]:
        """
        Golden-section search over `[0, upper]`. While the function still
        increases at the upper end the bracket is moved to
        `[upper / 2, 2 * upper]`, up to `mu_cap`.

        :return: The maximizer, and whether it is at the cap
        """
        config = self.search_config
        lower, upper = 0.0, config.mu_initial_upper
        while upper < config.mu_cap:
            edge = config.expansion_trigger * upper
            width = upper - edge
            diagnostics.evaluations += 2
            if not function(upper, width) > function(edge, width):
                break
            lower, upper = upper / 2, min(2 * upper, config.mu_cap)
            diagnostics.bracket_expansions += 1
            logger.debug("Expanded the mu/lam bracket to [%g, %g]", lower, upper)

        result = golden_section_maximize(function, lower, upper, config.mu_tol)
        diagnostics.evaluations += result.evaluations
        at_cap = (
            upper >= config.mu_cap
            and result.argmax > config.expansion_trigger * upper
        )
        return result.argmax, at_cap

    def __search_mu(
        self,
        point: OperatingPoint,
        lam: float,
        diagnostics: SearchDiagnostics,
        refine: bool,
    ) -> _MuSearch:
        """
        Maximizes `G(mu, lam)` over `mu = slope * lam`.

        Near a minimizer `-log Lambda` changes by about `lam` times the
        remaining error, so inner tolerances are scaled by `lam`.
        """
        if lam == 0.0 and self.problem.zero_row_property:
            # Omega(mu, 0) = 0 for every mu
            report = self.omega(
                TiltParams(mu=0.0, lam=0.0),
                diagnostics=diagnostics,
                record_trace=refine,
            )
            return _MuSearch(value=0.0, mu_star=0.0, report=report)

        scale = lam if lam > 0 else 1.0

        def evaluate(slope: float, width: float) -> float:
            tilt = TiltParams(mu=slope * scale, lam=lam)
            report = self.omega(tilt, self.__inner_tol(width, scale), diagnostics)
            return report.omega_value - tilt.mu * point.delta

        slope, at_cap = self.__maximize_slope(evaluate, diagnostics)
        tilt = TiltParams(mu=slope * scale, lam=lam)
        if refine:
            tol = self.__final_tol(scale)
        else:
            tol = self.__inner_tol(self.search_config.mu_tol, scale)
        report = self.omega(tilt, tol, diagnostics, record_trace=refine)
        value = report.omega_value - lam * point.rate - tilt.mu * point.delta
        return _MuSearch(value=value, mu_star=tilt.mu, report=report, at_cap=at_cap)

    def __flag_cap(self, search: _MuSearch, diagnostics: SearchDiagnostics) -> None:
        diagnostics.mu_at_cap = search.at_cap
        if search.at_cap:
            logger.warning(
                "Maximizer over mu/lam is at the bracket cap %g,"
                " the distortion level may be at the boundary of feasibility",
                self.search_config.mu_cap,
            )

    def g_lambda(self, point: OperatingPoint, lam: float) -> Tuple[float, float]:
        """
        `G(lam)(R, delta | P)`, the maximum of `G(mu, lam)` over `mu >= 0`.

        :param point: The operating point
        :param lam: The rate multiplier, in [0, 1]
        :return: The value and the maximizing `mu`
        """
        # Validates `lam`.
        TiltParams(mu=0.0, lam=lam)
        diagnostics = SearchDiagnostics()
        search = self.__search_mu(point, lam, diagnostics, refine=True)
        self.__flag_cap(search, diagnostics)
        return search.value, search.mu_star

    def supporting_line(self, point: OperatingPoint, lam: float) -> SupportingLine:
        """
        The supporting line of slope `-lam` to the exponent curve at the
        distortion level of `point`.

        :param point: The operating point
        :param lam: The rate multiplier, in [0, 1]
        :return: The supporting line
        """
        value, mu_star = self.g_lambda(point, lam)
        intercept = (value + lam * point.rate) / lam if lam > 0 else None
        return SupportingLine(
            lam=lam,
            mu_star=mu_star,
            point=point,
            value=value,
            intercept=intercept,
        )

    def exponent(self, point: OperatingPoint) -> ExponentResult:
        """
        The correct decoding probability exponent `G(R, delta | P)`,
        maximizing `G(lam)` over `lam` in [0, 1].

        When every source symbol has a zero distortion reproduction and the
        rate is at least `R(delta | P)` the exponent is 0, reached at
        `lam = 0`, and no search is run.

        :param point: The operating point
        :return: The exponent, the maximizers and the solve at the maximizers
        """
        diagnostics = SearchDiagnostics()

        if (
            self.problem.zero_row_property
            and point.rate >= self.__rate_distortion(point.delta)
        ):
            # G(lam) = lam * (R_cut(lam) - R) and R_cut(lam) <= R(delta)
            lam_star = 0.0
            final = self.__search_mu(point, lam_star, diagnostics, refine=True)
        else:

            def evaluate(lam: float, width: float) -> float:
                return self.__search_mu(point, lam, diagnostics, refine=False).value

            result = golden_section_maximize(
                evaluate, 0.0, 1.0, self.search_config.lambda_tol
            )
            diagnostics.evaluations += result.evaluations
            lam_star = result.argmax
            final = self.__search_mu(point, lam_star, diagnostics, refine=True)
            if lam_star > 0:
                endpoint = self.__search_mu(point, 0.0, diagnostics, refine=True)
                if endpoint.value > final.value:
                    lam_star, final = 0.0, endpoint
        self.__flag_cap(final, diagnostics)

        value = final.value
        if -self.search_config.zero_clamp_tol <= value < 0:
            value = 0.0
        logger.debug(
            "Exponent at R=%g, delta=%g: %.12g (lam*=%g, mu*=%g)",
            point.rate,
            point.delta,
            value,
            lam_star,
            final.mu_star,
        )
        return ExponentResult(
            value=value,
            lam_star=lam_star,
            mu_star=final.mu_star,
            point=point,
            report=final.report,
            diagnostics=diagnostics,
        )

    def cutoff_rate(self, delta: float, lam: float) -> CutoffResult:
        """
        The cutoff rate `R_cut(lam)(delta | P)`, the maximum over `mu >= 0`
        of `(Omega(mu, lam) - mu * delta) / lam`.

        :param delta: The distortion level
        :param lam: The rate multiplier, in (0, 1]
        :return: The cutoff rate
        :raises InvalidTiltError: `lam <= 0`
        """
        if not lam > 0:
            raise InvalidTiltError(f"The cutoff rate requires `lam > 0`, got {lam}")
        TiltParams(mu=0.0, lam=lam)
        point = OperatingPoint(rate=0.0, delta=delta)
        diagnostics = SearchDiagnostics()

        search = self.__search_mu(point, lam, diagnostics, refine=True)
        self.__flag_cap(search, diagnostics)
        return CutoffResult(
            value=max(search.value / lam, 0.0),
            mu_star=search.mu_star,
            lam=lam,
            delta=delta,
            report=search.report,
            diagnostics=diagnostics,
        )

    def rd_approx(self, delta: float, lam: float) -> RdApproxResult:
        """
        Approximates the rate-distortion function by the cutoff rate, with
        the error bound `c1 * sqrt(lam) * (log(1/lam) + c2)` where
        `c1 = 1.5 * sqrt(2 * alpha)`,
        `c2 = 4/3 log(|X||Y|) - log(2 * alpha) + 2/3 * d_max * |R'(delta)|`
        and `alpha = min(log |X|, log |Y|)`.

        The slope `R'(delta)` is estimated by finite differences of the
        Blahut-Arimoto oracle. Outside `lam <= 1 / (8 * alpha)` the bound is
        still evaluated but reported as not certified.

        :param delta: The distortion level
        :param lam: The rate multiplier, in (0, 1]
        :return: The approximation and its bound
        """
        cutoff = self.cutoff_rate(delta, lam)
        rows, columns = self.problem.shape
        d_max = self.problem.distortion.d_max
        derivative = self.__rd_derivative(delta)

        alpha = min(math.log(rows), math.log(columns))
        c1: Union[float, None] = None
        c2: Union[float, None] = None
        bound: Union[float, None] = None
        lam_max: Union[float, None] = None
        certified = False
        if alpha > 0 and math.isfinite(derivative):
            lam_max = 1.0 / (8.0 * alpha)
            c1 = 1.5 * math.sqrt(2.0 * alpha)
            c2 = (
                4.0 / 3.0 * math.log(rows * columns)
                - math.log(2.0 * alpha)
                + 2.0 / 3.0 * d_max * abs(derivative)
            )
            bound = max(c1 * math.sqrt(lam) * (math.log(1.0 / lam) + c2), 0.0)
            certified = lam <= lam_max and 0.0 < delta < d_max

        if not certified:
            logger.warning(
                "Rate-distortion bound not certified at delta=%g, lam=%g"
                " (requires 0 < lam <= %s and 0 < delta < %g)",
                delta,
                lam,
                f"{lam_max:g}" if lam_max is not None else "n/a",
                d_max,
            )
        return RdApproxResult(
            approx=cutoff.value,
            lam=lam,
            bound=bound,
            certified=certified,
            derivative=derivative,
            c1=c1,
            c2=c2,
            lam_max=lam_max,
            cutoff=cutoff,
        )

    def __rd_derivative(self, delta: float) -> float:
        step = max(1e-4, delta * 1e-3)
        upper = ba_rate_distortion(self.problem, delta + step)
        if delta - step >= 0:
            lower = ba_rate_distortion(self.problem, delta - step)
            return (upper - lower) / (2 * step)
        return (upper - ba_rate_distortion(self.problem, delta)) / step
