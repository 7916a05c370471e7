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
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Dict, List, Literal

from pydantic import BaseModel, ConfigDict

from rd_exponent._engine import SolveReport
from rd_exponent._search import (
    CutoffResult,
    ExponentResult,
    RdApproxResult,
    SearchDiagnostics,
)

NATS_TO_BITS = 1.0 / math.log(2.0)
PACKAGE_NAME = "rd-exponent"

Units = Literal["nats", "bits"]


def tool_version() -> str:
    try:
        return version(PACKAGE_NAME)
    except PackageNotFoundError:
        return "0.0.0"


class RunRecord(BaseModel):
    """
    Self-describing record of a command run.

    :param command: The subcommand
    :type command: str
    :param parameters: Echo of every parameter the command ran with
    :type parameters: Dict[str, Any]
    :param results: Values, maximizers and flags
    :type results: Dict[str, Any]
    :param diagnostics: Solver and search diagnostics
    :type diagnostics: Dict[str, Any]
    :param units: Unit of the rate and exponent values in `results`
    :type units: str
    :param converged: False when an inner solve hit its iteration limit
    :type converged: bool
    :param timestamp: When the record was produced
    :type timestamp: datetime
    :param version: Version of the tool
    :type version: str
    """

    command: str
    parameters: Dict[str, Any]
    results: Dict[str, Any]
    diagnostics: Dict[str, Any]
    units: Units = "nats"
    converged: bool = True
    timestamp: datetime
    version: str

    model_config = ConfigDict(ser_json_inf_nan="constants")


class RunRecordPresenter:
    @classmethod
    def build_result(
        cls,
        command: str,
        parameters: Dict[str, Any],
        results: Dict[str, Any],
        diagnostics: Dict[str, Any],
        units: Units = "nats",
        converged: bool = True,
    ) -> RunRecord:
        """
        Produces a run record, stamped with the current time and tool version.

        :param command: The subcommand
        :param parameters: The parameters echo
        :param results: Values already converted to `units`
        :param diagnostics: Solver and search diagnostics
        :param units: Unit of the values
        :param converged: Convergence of the inner solves
        :return: The record
        """
        return RunRecord(
            command=command,
            parameters=parameters,
            results=results,
            diagnostics=diagnostics,
            units=units,
            converged=converged,
            timestamp=datetime.now(timezone.utc),
            version=tool_version(),
        )

    @staticmethod
    def scale(units: Units) -> float:
        return NATS_TO_BITS if units == "bits" else 1.0

    @staticmethod
    def solve_diagnostics(report: SolveReport) -> Dict[str, Any]:
        return {
            "iterations": report.iterations,
            "converged": report.converged,
            "clamp_events": report.clamp_events,
            "omega_value": report.omega_value,
            "minus_log_lambda": report.minus_log_lambda,
            "rate_bound": report.rate_bound,
        }

    @classmethod
    def search_diagnostics(
        cls, search: SearchDiagnostics, report: SolveReport
    ) -> Dict[str, Any]:
        return {**search.model_dump(), **cls.solve_diagnostics(report)}

    @classmethod
    def exponent_results(cls, result: ExponentResult, units: Units) -> Dict[str, Any]:
        return {
            "value": result.value * cls.scale(units),
            "lam_star": result.lam_star,
            "mu_star": result.mu_star,
            "mu_at_cap": result.diagnostics.mu_at_cap,
            "converged": result.converged,
        }

    @classmethod
    def cutoff_results(cls, result: CutoffResult, units: Units) -> Dict[str, Any]:
        return {
            "lam": result.lam,
            "value": result.value * cls.scale(units),
            "mu_star": result.mu_star,
            "mu_at_cap": result.diagnostics.mu_at_cap,
            "converged": result.converged,
        }

    @classmethod
    def rd_row(
        cls, result: RdApproxResult, reference: float, units: Units
    ) -> Dict[str, Any]:
        scale = cls.scale(units)
        return {
            "delta": result.cutoff.delta,
            "rd_approx": result.approx * scale,
            "certified_bound": (
                result.bound * scale if result.bound is not None else math.nan
            ),
            "ba_reference": reference * scale,
            "certified": result.certified,
            "mu_at_cap": result.cutoff.diagnostics.mu_at_cap,
        }

    @classmethod
    def trace_rows(cls, report: SolveReport, units: Units) -> List[Dict[str, Any]]:
        if report.trace is None:
            return []
        scale = cls.scale(units)
        return [
            {
                "t": row["t"],
                "objective": row["objective"] * scale,
                "minus_log_lambda": row["minus_log_lambda"] * scale,
                "step_kl": row["step_kl"] * scale,
            }
            for row in report.trace.rows()
        ]
