#!/usr/bin/env python3

"""
Unified CLI for deskvln.

Provides a single entry point 'dvln' that dispatches to all subcommands.
"""
import sys

from deskvln.config.cli import main as config_main
from deskvln.evaluate.cli import main as eval_main
from deskvln.generate.cli import main as generate_main
from deskvln.replay.cli import main as replay_main
from deskvln.report.cli import main as report_main

COMMANDS = {
    "generate": generate_main,
    "eval": eval_main,
    "replay": replay_main,
    "report": report_main,
    "config": config_main,
}


def main(argv: list[str] | None = None):
    """
    Unified CLI dispatcher.

    Usage:
        dvln generate [args]    # Sample an episode dataset
        dvln eval [args]        # Evaluate a policy
        dvln replay [args]      # Replay traces as text
        dvln report [args]      # Compare runs
        dvln config [args]      # Validate configuration
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ("-h", "--help", "help"):
        print_help()
        return

    subcommand, rest = argv[0], argv[1:]
    command = COMMANDS.get(subcommand)
    if command is None:
        print(f"error: unknown command: {subcommand}", file=sys.stderr)
        print(f"Valid commands: {', '.join(COMMANDS)}", file=sys.stderr)
        sys.exit(2)
    command(rest)


def print_help():
    """Print help message for the unified CLI."""
    help_text = """
deskvln (dvln) - Desk-scale embodied vision-and-language navigation benchmark

Usage:
    dvln <command> [args...]

Commands:
    generate      Sample start-goal episodes on a map (episodes.json, manifest.json)
    eval          Run a policy over a dataset (episodes.csv, aggregate.json, table.txt,
                  traces.jsonl)
    replay        Print ASCII frames of recorded traces
    report        Merge aggregate results into one comparison table
    config        Validate the effective DVLN_* configuration

Configuration, lowest to highest priority:
    packaged defaults.env -> project .env -> --config FILE -> DVLN_* variables -> flags

Examples:
    # Generate, evaluate and inspect on the packaged demo map
    dvln generate --seed 7 --out runs/demo
    dvln eval --dataset runs/demo/episodes.json --policy oracle --seed 7 --out runs/oracle
    dvln replay runs/oracle/traces.jsonl --episode demo-0000

    # Cross-embodiment comparison
    dvln eval --dataset runs/demo/episodes.json --policy cma --controller speed \\
        --profile quadruped --seed 7 --out runs/cma-quadruped
    dvln report runs/oracle runs/cma-quadruped

For help on a specific command:
    dvln <command> --help
"""
    print(help_text)


if __name__ == "__main__":
    main()
