"""Command-line front end: ``wave-cauchy <command> --config <path>``."""

import argparse

from wave_cauchy import __version__
from wave_cauchy.pipeline import run_command
from wave_cauchy.utils.config import COMMANDS

DEFAULT_CONFIG = "config/config.toml"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wave-cauchy",
        description=(
            "Regularized reconstruction for the Cauchy problem of the wave "
            "equation in the half-plane."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument(
        "--config", default=DEFAULT_CONFIG, help="TOML configuration file"
    )
    parser.add_argument(
        "--out",
        default=None,
        help='Output directory; "-" writes to standard output',
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads; 0 uses every core",
    )
    parser.add_argument(
        "--no-timestamp",
        action="store_true",
        help="Omit the timestamp comment line from CSV outputs",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    """Parse the arguments, run the command and return its exit code."""
    args = build_parser().parse_args(argv)
    return run_command(
        args.config,
        args.command,
        out_dir=args.out,
        threads=args.threads,
        timestamp=False if args.no_timestamp else None,
    )
