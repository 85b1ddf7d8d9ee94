"""
Command-line interface for generating episode datasets.
"""
import argparse
import dataclasses
import sys

from deskvln.bench.settings import SimConfig
from deskvln.errors import DeskVlnError
from deskvln.generate.generate import cmd_generate
from deskvln.utils.cli import (
    add_common_arguments,
    default_help,
    map_path,
    preparse_config,
    print_run_config,
    require_seed,
    setup_logging,
)
from deskvln.utils.env import env


def main(argv: list[str] | None = None):
    preparse_config(argv)
    parser = argparse.ArgumentParser(
        prog="dvln generate",
        description="Sample start-goal episodes on a map and write a dataset with its manifest",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # 50 episodes on the packaged demo map
  dvln generate --seed 7 --out runs/demo

  # A custom map with longer paths
  dvln generate --map maps/office.map --episodes 200 --min-len 5 --seed 1 --out runs/office

Writes episodes.json and manifest.json into --out.
        """,
    )
    parser.add_argument(
        "--map",
        type=str,
        default=env.get_as("DVLN_MAP", "path_str"),
        help="Map file (empty: packaged demo map). " + default_help("DVLN_MAP", "path_str"),
    )
    parser.add_argument(
        "-n",
        "--episodes",
        type=int,
        default=env.get_as("DVLN_EPISODES", int, 50),
        help="Episodes to sample. " + default_help("DVLN_EPISODES", int),
    )
    parser.add_argument(
        "--min-len",
        type=float,
        default=None,
        help="Shortest start-goal geodesic in meters. " + default_help("DVLN_MIN_LEN", float),
    )
    parser.add_argument(
        "--max-len",
        type=float,
        default=None,
        help="Longest start-goal geodesic in meters. " + default_help("DVLN_MAX_LEN", float),
    )
    parser.add_argument(
        "-o",
        "--out",
        type=str,
        default=env.get_as("DVLN_OUT", "path_str"),
        help="Output directory. " + default_help("DVLN_OUT", "path_str"),
    )
    add_common_arguments(parser)
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    seed = require_seed(parser, args.seed)
    if not args.out:
        parser.error("an output directory is required: pass --out or set DVLN_OUT")

    sim = SimConfig.from_env(env)
    bounds = {"min_len": args.min_len, "max_len": args.max_len}
    changes = {k: v for k, v in bounds.items() if v is not None}
    try:
        sampling = dataclasses.replace(sim.sampling, **changes)
    except DeskVlnError as e:
        parser.error(str(e))
    map_file = map_path(args.map)
    print_run_config(
        "generate",
        {
            "map": map_file,
            "episodes": args.episodes,
            "seed": seed,
            "min_len": sampling.min_len,
            "max_len": sampling.max_len,
            "out": args.out,
        },
    )
    try:
        paths = cmd_generate(map_file, args.episodes, seed, args.out, sampling)
    except (DeskVlnError, FileNotFoundError) as e:
        if args.verbose:
            raise
        print(f"error: {e}", file=sys.stderr)
        sys.exit(1)
    print(f"Wrote {paths[0]} and {paths[1]}", file=sys.stderr)


if __name__ == "__main__":
    main()
