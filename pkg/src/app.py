"""Command-line runner for the chiral quantum walk search experiments.

    python src/app.py evolve --theta 0.8 --gamma s1 --out results/evolve.csv
    python src/app.py reproduce 7a
"""

import os
import sys
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import argparse
import logging

from config.settings import load_settings
from experiments.commands import COMMANDS, ExperimentConfig, parse_grid, run_command
from experiments.presets import DEFAULTS, FIGURES
from walk.errors import InvalidParameterError

logger = logging.getLogger("chiralwalk")

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def _gamma_arg(text):
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        return text


def _grid_arg(text):
    try:
        return parse_grid(text)
    except InvalidParameterError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _add_common(parser):
    parser.add_argument("--n", type=int, default=None, help=f"number of vertices, odd (default {DEFAULTS['n']})")
    parser.add_argument("--theta", type=float, default=None, help="edge phase in radians, any real value")
    parser.add_argument("--theta-grid", type=_grid_arg, default=None, metavar="START:STOP:COUNT")
    parser.add_argument("--gamma", type=_gamma_arg, default=None, help="s1, asymptotic or a number")
    parser.add_argument("--gamma-grid", type=_grid_arg, default=None, metavar="START:STOP:COUNT",
                        help="jumping rates in units of 1/n for the overlaps command")
    parser.add_argument("--marked", type=int, default=None)
    parser.add_argument("--tmax", type=float, default=None)
    parser.add_argument("--dt", type=float, default=None, help="time step (default tmax/2000)")
    parser.add_argument("--k-levels", type=int, default=None)
    parser.add_argument("--guard-margin", type=float, default=None)
    parser.add_argument("--out", default=None, help="output CSV path")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chiralwalk",
        description="Chiral quantum walk search on the complete graph: spectra, sums, levels and dynamics as CSV.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _add_common(subparsers.add_parser(name))
    reproduce = subparsers.add_parser("reproduce", help="run a figure preset")
    reproduce.add_argument("figure_id", choices=list(FIGURES))
    _add_common(reproduce)
    return parser


def config_from_args(args, settings):
    """Build the ExperimentConfig; flags left unset keep the defaults."""
    overrides = {
        "n": args.n,
        "theta": args.theta,
        "theta_grid": args.theta_grid,
        "gamma": args.gamma,
        "gamma_grid": args.gamma_grid,
        "marked": args.marked,
        "t_max": args.tmax,
        "dt": args.dt,
        "k_levels": args.k_levels,
        "guard_margin": args.guard_margin,
        "output_path": args.out,
    }
    return ExperimentConfig(
        output_dir=settings["CHIRALWALK_OUTPUT_DIR"],
        threads=settings["CHIRALWALK_THREADS"],
        **{key: value for key, value in overrides.items() if value is not None},
    )


def main(argv=None):
    settings = load_settings()
    logging.basicConfig(level=settings["CHIRALWALK_LOG_LEVEL"], format=LOG_FORMAT, stream=sys.stderr)

    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = config_from_args(args, settings)
    except InvalidParameterError as e:
        logger.error("❌ %s", e)
        return e.exit_code

    result = run_command(args.command, config, figure_id=getattr(args, "figure_id", None))
    if result["success"]:
        logger.info("✓ %s", result["message"])
    return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
