"""
Command-line interface for checking the effective configuration.
"""
import argparse
import sys

from deskvln.config.validate import print_validation_results, validate_all
from deskvln.utils.cli import add_common_arguments, preparse_config, setup_logging
from deskvln.utils.env import env


def main(argv: list[str] | None = None):
    preparse_config(argv)
    parser = argparse.ArgumentParser(
        prog="dvln config",
        description="Validate every DVLN_* setting after merging all configuration layers",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Built-in defaults plus the project .env and DVLN_* variables
  dvln config

  # Check a run config before using it
  dvln config --config runs/humanoid.env

Exits 1 when any value is invalid.
        """,
    )
    add_common_arguments(parser, seed=False)
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    if env.config_file is not None:
        print(f"Config file: {env.config_file}", file=sys.stderr)
    all_valid, results = validate_all(env)
    print_validation_results(all_valid, results)
    sys.exit(0 if all_valid else 1)


if __name__ == "__main__":
    main()
