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
import sys
from pathlib import Path
from typing import Any, List, NoReturn, Sequence, Union

from rd_exponent._engine import SolverConfig
from rd_exponent._search import SearchConfig
from rd_exponent.exceptions import (
    InvalidConfigError,
    InvalidProblemError,
    InvalidTiltError,
    OracleLimitError,
    ProblemFileNotFoundError,
    ProblemSchemaError,
    SupportError,
)

from .commands import (
    ORACLES,
    cmd_cutoff,
    cmd_exponent,
    cmd_oracle,
    cmd_rd,
    cmd_trace,
)
from .csv_output import format_value
from .records import RunRecord

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FILE_NOT_FOUND = 2
EXIT_USAGE = 3
EXIT_INVALID_PROBLEM = 4
EXIT_NOT_CONVERGED = 5


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with the documented exit code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_options(parser: argparse.ArgumentParser) -> None:
    defaults = SolverConfig()
    parser.add_argument("problem", help="JSON problem file")
    parser.add_argument(
        "--bits", action="store_true", help="Report rates and exponents in bits"
    )
    parser.add_argument("--tol", type=float, default=defaults.tol)
    parser.add_argument("--max-iters", type=int, default=defaults.max_iters)
    parser.add_argument("--record", help="Write the run record as JSON to this file")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v info, -vv debug"
    )


def _search_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mu-cap", type=float, default=SearchConfig().mu_cap)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="rd-exponent",
        description=(
            "Correct decoding probability exponent, cutoff rate and"
            " rate-distortion approximation of discrete memoryless sources"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("exponent", help="Exponent G(R, delta | P)")
    _common_options(pe)
    _search_options(pe)
    pe.add_argument("--rate", type=float, required=True, help="R, in nats")
    pe.add_argument("--delta", type=float, required=True)
    pe.add_argument("--trace", help="CSV trace of the solve at the maximizer")
    pe.set_defaults(func=cmd_exponent)

    pc = sub.add_parser("cutoff", help="Cutoff rate R_cut(lam)(delta | P)")
    _common_options(pc)
    _search_options(pc)
    pc.add_argument("--delta", type=float, required=True)
    pc.add_argument(
        "--lam", required=True, help="Rate multiplier, or a comma separated list"
    )
    pc.set_defaults(func=cmd_cutoff)

    pr = sub.add_parser("rd", help="Rate-distortion approximation sweep")
    _common_options(pr)
    _search_options(pr)
    pr.add_argument(
        "--deltas", required=True, help="Comma separated distortion levels"
    )
    pr.add_argument("--lam", type=float, default=1e-3)
    pr.add_argument("--output", default="-", help="CSV destination, - for stdout")
    pr.set_defaults(func=cmd_rd)

    pt = sub.add_parser("trace", help="Iteration trace of a single solve")
    _common_options(pt)
    pt.add_argument("--mu", type=float, required=True)
    pt.add_argument("--lam", type=float, required=True)
    pt.add_argument("--output", default="-", help="CSV destination, - for stdout")
    pt.set_defaults(func=cmd_trace)

    po = sub.add_parser("oracle", help="Brute-force and closed-form oracles")
    po.add_argument("oracle", choices=ORACLES)
    _common_options(po)
    po.add_argument("--rate", type=float)
    po.add_argument("--delta", type=float)
    po.add_argument("--mu", type=float)
    po.add_argument("--lam", type=float)
    po.add_argument("--step", type=float)
    po.add_argument("--slack", type=float)
    po.set_defaults(func=cmd_oracle)

    return parser


def _print_value(name: str, value: Any, indent: str = "") -> None:
    if isinstance(value, dict):
        print(f"{indent}{name}:")
        for key, item in value.items():
            _print_value(key, item, indent + "  ")
    elif isinstance(value, list):
        print(f"{indent}{name}:")
        for index, item in enumerate(value):
            _print_value(f"[{index}]", item, indent + "  ")
    else:
        print(f"{indent}{name}: {format_value(value)}")


def print_record(record: RunRecord) -> None:
    for name, value in record.results.items():
        _print_value(name, value)
    print(f"units: {record.units}")
    print(f"converged: {format_value(record.converged)}")


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )


def main(argv: Union[Sequence[str], None] = None) -> int:
    """
    Runs a subcommand and returns its exit code:
    0 success, 2 problem file missing, 3 usage or schema error,
    4 invalid problem, 5 a solve did not converge (the best value is still
    reported).

    :param argv: Command line arguments, defaults to `sys.argv[1:]`
    :return: The exit code
    """
    parser = build_parser()
    arguments: List[str] = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(arguments)
    _configure_logging(args.verbose)

    try:
        record = args.func(args)
    except ProblemFileNotFoundError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_FILE_NOT_FOUND
    except (
        ProblemSchemaError,
        InvalidConfigError,
        InvalidTiltError,
        OracleLimitError,
    ) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidProblemError, SupportError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_INVALID_PROBLEM

    # CSV tables written to stdout are not mixed with the summary.
    if getattr(args, "output", None) != "-":
        print_record(record)
    if args.record:
        Path(args.record).write_text(record.model_dump_json(indent=2), encoding="utf-8")

    if not record.converged:
        logger.warning("At least one solve hit the iteration limit")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def run() -> None:
    sys.exit(main())
