"""Command-line entry point ``sinai-lab``."""
from __future__ import annotations

import argparse
import sys

from .config import load_config
from .const import DEFAULT_TOL, EXIT_OK, EXIT_RUNTIME_ERROR, LOGGER, NAME, VERSION
from .Controller import Controller
from .exceptions import ConfigError, ResultIoError, SinaiLabError
from .kesten import density_table
from .report import emit_report
from .utils import LOG_LEVELS, save_rows_as_csv, setup_logging


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with the run, report and density commands."""
    parser = argparse.ArgumentParser(prog="sinai-lab", description=NAME)
    parser.add_argument("--version", action="version", version="%(prog)s " + VERSION)
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run the suite(s) of a config")
    run.add_argument("config", help="path of the JSON config")
    run.add_argument("--threads", type=int, default=None)
    run.add_argument("--out", default=None)
    run.add_argument("--log-level", choices=LOG_LEVELS, default=None)

    report = commands.add_parser("report", help="summarize a results directory")
    report.add_argument("directory")

    density = commands.add_parser("density", help="limit density tools")
    tools = density.add_subparsers(dest="tool", required=True)
    table = tools.add_parser("table", help="print phi on a grid as CSV")
    table.add_argument("--from", dest="x_from", type=float, default=-5.0)
    table.add_argument("--to", dest="x_to", type=float, default=5.0)
    table.add_argument("--step", type=float, default=0.01)
    table.add_argument("--tol", type=float, default=DEFAULT_TOL)
    table.add_argument("--output", default=None, help="write the CSV to this file instead of stdout")
    return parser


def run_config(config_path: str, threads: int = None, out: str = None, log_level: str = None) -> int:
    """Run a config file and return the exit code (0 pass, 2 assertion failure)."""
    config = load_config(config_path, threads=threads, out=out, log_level=log_level)
    setup_logging(config.log_level)
    LOGGER.info("Running %s with seed %d on %d threads", config.suite.value, config.seed, config.threads)
    return Controller(config).run()


DENSITY_COLUMNS = ["x", "phi", "error_bound"]


def _density_table(args) -> int:
    rows = density_table(args.x_from, args.x_to, args.step, args.tol)
    if args.output:
        save_rows_as_csv(rows, args.output, columns=DENSITY_COLUMNS)
        return EXIT_OK
    sys.stdout.write(",".join(DENSITY_COLUMNS) + "\n")
    for row in rows:
        sys.stdout.write(",".join(repr(row[column]) for column in DENSITY_COLUMNS) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    """Parse the arguments, dispatch and map lab errors to exit code 1."""
    args = build_parser().parse_args(argv)
    setup_logging(getattr(args, "log_level", None) or "info")
    try:
        if args.command == "run":
            return run_config(args.config, args.threads, args.out, args.log_level)
        if args.command == "report":
            text, code = emit_report(args.directory)
            sys.stdout.write(text)
            return code
        return _density_table(args)
    except ConfigError as exception:
        LOGGER.warning(exception)
    except ResultIoError as exception:
        LOGGER.error(exception)
    except SinaiLabError as exception:
        LOGGER.exception(exception)
    return EXIT_RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
