"""
Command-line interface for comparing evaluation runs.
"""
import argparse
import sys

from deskvln.errors import DeskVlnError
from deskvln.report.report import cmd_report
from deskvln.utils.cli import add_common_arguments, preparse_config, setup_logging


def main(argv: list[str] | None = None):
    preparse_config(argv)
    parser = argparse.ArgumentParser(
        prog="dvln report",
        description="Merge aggregate results into one table keyed by policy, profile, "
        "controller and lighting",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Lighting comparison
  dvln report runs/dl5000/aggregate.json runs/dl300/aggregate.json runs/cl/aggregate.json

  # Run directories work too
  dvln report runs/*/
        """,
    )
    parser.add_argument(
        "results", nargs="+", help="aggregate.json files or the run directories holding them"
    )
    add_common_arguments(parser, seed=False)
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    try:
        table = cmd_report(args.results)
    except (DeskVlnError, FileNotFoundError) as e:
        if args.verbose:
            raise
        print(f"error: {e}", file=sys.stderr)
        sys.exit(1)
    sys.stdout.write(table)


if __name__ == "__main__":
    main()
