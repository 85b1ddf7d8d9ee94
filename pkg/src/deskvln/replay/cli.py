"""
Command-line interface for replaying recorded episodes as text.
"""
import argparse
import sys

from deskvln.errors import DeskVlnError
from deskvln.replay.replay import cmd_replay
from deskvln.utils.cli import (
    add_common_arguments,
    default_help,
    map_path,
    preparse_config,
    setup_logging,
)
from deskvln.utils.env import env


def main(argv: list[str] | None = None):
    preparse_config(argv)
    parser = argparse.ArgumentParser(
        prog="dvln replay",
        description="Print ASCII frames of recorded episodes: pose, per-step action and events",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Every episode of a run on the demo map
  dvln replay runs/demo/oracle/traces.jsonl

  # One episode, paged
  dvln replay runs/demo/random/traces.jsonl --episode demo-0003 | less
        """,
    )
    parser.add_argument("traces", type=str, help="traces.jsonl written by dvln eval")
    parser.add_argument(
        "--map",
        type=str,
        default=env.get_as("DVLN_MAP", "path_str"),
        help="Map the run used (empty: packaged demo map). " + default_help("DVLN_MAP", "path_str"),
    )
    parser.add_argument("--episode", type=str, default=None, help="Only this episode id")
    add_common_arguments(parser, seed=False)
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    try:
        text = cmd_replay(args.traces, map_path(args.map), args.episode)
    except (DeskVlnError, FileNotFoundError) as e:
        if args.verbose:
            raise
        print(f"error: {e}", file=sys.stderr)
        sys.exit(1)
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
