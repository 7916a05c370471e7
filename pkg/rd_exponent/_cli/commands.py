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

import argparse
import logging
from typing import Any, Dict, List, Sequence

from rd_exponent._engine import SolverConfig, TiltParams, solve_omega
from rd_exponent._oracle import (
    DEFAULT_JOINT_STEP,
    GridSpec,
    analytic_binary_hamming_rd,
    ba_rate_distortion,
    default_marginal_step,
    grid_gck,
    grid_joint_g,
    grid_omega,
    is_binary_hamming,
)
from rd_exponent._search import ExponentSolver, OperatingPoint, SearchConfig
from rd_exponent.exceptions import InvalidConfigError, OracleLimitError

from .csv_output import csv_table
from .problem_file import load_problem_file
from .records import RunRecord, RunRecordPresenter, Units

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ("t", "objective", "minus_log_lambda", "step_kl")
RD_COLUMNS = (
    "delta",
    "rd_approx",
    "certified_bound",
    "ba_reference",
    "certified",
    "mu_at_cap",
)
ORACLES = ("ba", "analytic", "grid_gck", "grid_joint_g", "grid_omega")


def _parameters(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in ("func", "verbose", "record")
    }


def _units(args: argparse.Namespace, file_units: Units) -> Units:
    return "bits" if args.bits else file_units


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(tol=args.tol, max_iters=args.max_iters)


def _search_config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(mu_cap=args.mu_cap)


def _float_list(text: str, name: str) -> List[float]:
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise InvalidConfigError(f"`{name}` must be a comma separated list of numbers")
    if not values:
        raise InvalidConfigError(f"`{name}` is empty")
    return values


def _write_trace(path: str, rows: Sequence[Dict[str, Any]]) -> None:
    with csv_table(path, TRACE_COLUMNS) as table:
        for row in rows:
            table.write(row)


def cmd_exponent(args: argparse.Namespace) -> RunRecord:
    problem_file = load_problem_file(args.problem)
    units = _units(args, problem_file.units)
    solver = ExponentSolver(
        problem_file.to_problem(), _solver_config(args), _search_config(args)
    )
    result = solver.exponent(OperatingPoint(rate=args.rate, delta=args.delta))
    if args.trace:
        _write_trace(args.trace, RunRecordPresenter.trace_rows(result.report, units))

    return RunRecordPresenter.build_result(
        command="exponent",
        parameters=_parameters(args),
        results=RunRecordPresenter.exponent_results(result, units),
        diagnostics=RunRecordPresenter.search_diagnostics(
            result.diagnostics, result.report
        ),
        units=units,
        converged=result.converged,
    )


def cmd_cutoff(args: argparse.Namespace) -> RunRecord:
    problem_file = load_problem_file(args.problem)
    units = _units(args, problem_file.units)
    lams = _float_list(args.lam, "lam")
    solver = ExponentSolver(
        problem_file.to_problem(), _solver_config(args), _search_config(args)
    )
    results = [solver.cutoff_rate(args.delta, lam) for lam in lams]

    values: Dict[str, Any] = {
        "cutoff": [RunRecordPresenter.cutoff_results(r, units) for r in results]
    }
    if len(results) > 1:
        ordered = sorted(results, key=lambda r: r.lam)
        # Nonincreasing in lam, up to the search tolerance.
        monotone = all(
            later.value <= earlier.value + 1e-4
            for earlier, later in zip(ordered, ordered[1:])
        )
        if not monotone:
            logger.warning("Cutoff rates are not nonincreasing in lam")
        values["nonincreasing_in_lam"] = monotone
    return RunRecordPresenter.build_result(
        command="cutoff",
        parameters=_parameters(args),
        results=values,
        diagnostics={
            "cutoff": [
                RunRecordPresenter.search_diagnostics(r.diagnostics, r.report)
                for r in results
            ]
        },
        units=units,
        converged=all(r.converged for r in results),
    )


def cmd_rd(args: argparse.Namespace) -> RunRecord:
    problem_file = load_problem_file(args.problem)
    units = _units(args, problem_file.units)
    deltas = _float_list(args.deltas, "deltas")
    problem = problem_file.to_problem()
    solver = ExponentSolver(problem, _solver_config(args), _search_config(args))

    rows = []
    results = []
    for delta in deltas:
        result = solver.rd_approx(delta, args.lam)
        results.append(result)
        rows.append(
            RunRecordPresenter.rd_row(
                result, ba_rate_distortion(problem, delta), units
            )
        )
    with csv_table(args.output, RD_COLUMNS) as table:
        for row in rows:
            table.write(row)

    return RunRecordPresenter.build_result(
        command="rd",
        parameters=_parameters(args),
        results={
            "rows": rows,
            "lam_max": results[0].lam_max,
            "c1": results[0].c1,
        },
        diagnostics={
            "rows": [
                RunRecordPresenter.search_diagnostics(
                    r.cutoff.diagnostics, r.cutoff.report
                )
                for r in results
            ]
        },
        units=units,
        converged=all(r.cutoff.converged for r in results),
    )


def cmd_trace(args: argparse.Namespace) -> RunRecord:
    problem_file = load_problem_file(args.problem)
    units = _units(args, problem_file.units)
    config = _solver_config(args).model_copy(update={"record_trace": True})
    report = solve_omega(
        problem_file.to_problem(), TiltParams(mu=args.mu, lam=args.lam), config
    )
    rows = RunRecordPresenter.trace_rows(report, units)
    _write_trace(args.output, rows)

    scale = RunRecordPresenter.scale(units)
    return RunRecordPresenter.build_result(
        command="trace",
        parameters=_parameters(args),
        results={
            "omega_value": report.omega_value * scale,
            "minus_log_lambda": report.minus_log_lambda * scale,
            "chain_violation": (
                report.trace.chain_violation() if report.trace is not None else 0.0
            ),
        },
        diagnostics=RunRecordPresenter.solve_diagnostics(report),
        units=units,
        converged=report.converged,
    )


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [name for name in names if getattr(args, name) is None]
    if missing:
        flags = ", ".join(f"--{name.replace('_', '-')}" for name in missing)
        raise InvalidConfigError(f"Oracle `{args.oracle}` requires {flags}")


def cmd_oracle(args: argparse.Namespace) -> RunRecord:
    problem_file = load_problem_file(args.problem)
    units = _units(args, problem_file.units)
    problem = problem_file.to_problem()

    if args.oracle == "ba":
        _require(args, "delta")
        value = ba_rate_distortion(problem, args.delta)
    elif args.oracle == "analytic":
        _require(args, "delta")
        if not is_binary_hamming(problem):
            raise OracleLimitError(
                "The analytic oracle requires a binary Hamming problem"
            )
        value = analytic_binary_hamming_rd(float(problem.source.probs[0]), args.delta)
    elif args.oracle == "grid_omega":
        _require(args, "mu", "lam")
        grid = GridSpec(step=args.step or DEFAULT_JOINT_STEP, slack=args.slack)
        value = grid_omega(problem, TiltParams(mu=args.mu, lam=args.lam), grid)
    else:
        _require(args, "rate", "delta")
        point = OperatingPoint(rate=args.rate, delta=args.delta)
        if args.oracle == "grid_gck":
            step = args.step or default_marginal_step(problem)
            grid = GridSpec(step=step, slack=args.slack)
            value = grid_gck(problem, point, grid)
        else:
            grid = GridSpec(step=args.step or DEFAULT_JOINT_STEP, slack=args.slack)
            value = grid_joint_g(problem, point, grid)

    return RunRecordPresenter.build_result(
        command="oracle",
        parameters=_parameters(args),
        results={
            "oracle": args.oracle,
            "value": value * RunRecordPresenter.scale(units),
        },
        diagnostics={},
        units=units,
    )
