"""
Helpers shared by the subcommand parsers.

Each subcommand first pre-parses --config so that a config file can take part in
the defaults shown by the real parser, then reads every other default from env.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Mapping

from deskvln.utils.assets import asset_path
from deskvln.utils.env import env

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def preparse_config(argv: list[str] | None = None) -> Path | None:
    """
    Load --config into env (between the project .env and os.environ).

    Exits with status 2 when the file does not exist.
    """
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=str, default=None)
    args, _ = pre.parse_known_args(argv)
    if args.config is None:
        return None
    path = Path(args.config).expanduser()
    if not path.is_file():
        print(f"error: config file not found: {path}", file=sys.stderr)
        sys.exit(2)
    env.use_config_file(path.resolve())
    return path


def default_help(key: str, type=str) -> str:
    value = env.get_as(key, type)
    return f"Default from .env: {value if value not in (None, '') else '(not set)'}"


def add_common_arguments(parser: argparse.ArgumentParser, seed: bool = True) -> None:
    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="Config file in .env syntax, below DVLN_* environment variables in priority",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        default=env.get_as("DVLN_VERBOSE", bool, False),
        help="Debug logging and full tracebacks. " + default_help("DVLN_VERBOSE", bool),
    )
    if seed:
        parser.add_argument(
            "--seed",
            type=int,
            default=env.get_as("DVLN_SEED", int),
            help="Run seed (required, no clock-based default). " + default_help("DVLN_SEED", int),
        )


def setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def require_seed(parser: argparse.ArgumentParser, seed: int | None) -> int:
    if seed is None:
        parser.error("a seed is required: pass --seed or set DVLN_SEED")
    return seed


def map_path(value: str | None) -> Path:
    """The --map value, or the packaged demo map when it is empty."""
    return Path(value).expanduser() if value else asset_path("demo.map")


def print_run_config(title: str, settings: Mapping[str, object]) -> None:
    """Echo the effective configuration to stderr."""
    print(f"{title}:", file=sys.stderr)
    width = max((len(k) for k in settings), default=0)
    for key, value in settings.items():
        print(f"  {key.ljust(width)}  {value}", file=sys.stderr)
