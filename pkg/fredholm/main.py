import argparse
import sys
from pathlib import Path
from typing import List, Optional

from fredholm.cli.commands import (
    EXIT_CONFIG,
    cmd_certify,
    cmd_compare,
    cmd_list,
    cmd_solve,
    load_run_config,
    resolve_output_dir,
)
from fredholm.core.exceptions import ConfigError
from fredholm.core.logging import setup_logging
from fredholm.models.schemas import SolverMethod


class _Parser(argparse.ArgumentParser):
    """Report usage errors as ConfigError so they map to exit code 1"""

    def error(self, message):
        raise ConfigError(message, source="usage")


def _run_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", help="Registered problem name (see `list`)")
    common.add_argument("--config", type=Path, help="Flat JSON run configuration; flags override it")
    common.add_argument("--method", choices=[m.value for m in SolverMethod])
    common.add_argument("--quad-order", dest="quad_order", type=int)
    common.add_argument("--tol", dest="tol_residual", type=float, help="Residual tolerance")
    common.add_argument("--tol-step", dest="tol_step", type=float, help="Step tolerance")
    common.add_argument("--max-iter", dest="max_iter", type=int)
    common.add_argument("--initial", dest="initial_constant", type=float, help="Constant initial guess u_0")
    common.add_argument("--denom-guard", dest="denom_guard", type=float)
    common.add_argument("--keep-iterates", dest="keep_iterates", action="store_true", default=None)
    common.add_argument("--out", help="Output directory (default: $FREDHOLM_OUT or ./outputs)")
    common.add_argument("--plot-points", dest="plot_points", type=int)
    common.add_argument("--plot-iterate", dest="plot_iterate", type=int, help="Also write iterate_<n>.csv for u_n (solve)")
    return common


RUN_KEYS = ("problem", "method", "quad_order", "tol_residual", "tol_step", "max_iter",
            "initial_constant", "denom_guard", "keep_iterates", "plot_points", "plot_iterate")


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = _Parser(
        prog="fredholm",
        description="Newton-type solver for nonlinear Fredholm integral equations of the second kind.",
    )
    parser.add_argument("--log-level", dest="log_level", default=None)
    commands = parser.add_subparsers(dest="command", required=True)
    common = _run_flags()

    commands.add_parser("list", help="List registered problems")
    commands.add_parser("solve", parents=[common], help="Solve a problem, write report.json and solution.csv")
    commands.add_parser("compare", parents=[common], help="Run Newton-type and Picard, write compare.csv")
    certify = commands.add_parser("certify", parents=[common], help="Estimate the contraction constant of H_1")
    certify.add_argument("--radius", type=float, default=0.1)
    certify.add_argument("--samples", type=int, default=50)
    certify.add_argument("--seed", type=int, default=0)
    certify.add_argument("--direction-radius", dest="direction_radius", type=float, default=0.1)
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _parse_args(argv)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    setup_logging(args.log_level)

    if args.command == "list":
        cmd_list()
        return 0

    try:
        config = load_run_config(args.config, {key: getattr(args, key) for key in RUN_KEYS})
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = resolve_output_dir(config, args.out)

    if args.command == "solve":
        return cmd_solve(config, out_dir)
    if args.command == "compare":
        return cmd_compare(config, out_dir)
    return cmd_certify(config, out_dir, radius=args.radius, samples=args.samples,
                       seed=args.seed, direction_radius=args.direction_radius)


if __name__ == "__main__":
    raise SystemExit(main())
