"""
Command-line interface for evaluating a policy on an episode dataset.
"""
import argparse
import sys
from pathlib import Path

from deskvln.bench.results import TABLE_TXT
from deskvln.bench.runner import EvalSettings
from deskvln.bench.settings import SimConfig
from deskvln.control.commands import ControllerKind
from deskvln.embodiment.profile import ProfileKind
from deskvln.errors import DeskVlnError
from deskvln.evaluate.evaluate import cmd_eval
from deskvln.policy.registry import POLICY_NAMES
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
from deskvln.world.lighting import LightingKind


def parse_assignment(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected field=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def main(argv: list[str] | None = None):
    preparse_config(argv)
    parser = argparse.ArgumentParser(
        prog="dvln eval",
        description="Run a policy over an episode dataset and write its metrics",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
  # Shortest-path oracle with idealized execution
  dvln eval --dataset runs/demo/episodes.json --policy oracle --seed 7 --out runs/demo/oracle

  # Random walker on a humanoid under dim light, 4 worker processes
  dvln eval --dataset runs/demo/episodes.json --policy random --controller speed \\
      --profile humanoid --lighting DL300 --workers 4 --seed 7 --out runs/demo/random

Registered policies: {", ".join(POLICY_NAMES)}
Writes episodes.csv, aggregate.json, table.txt and traces.jsonl into --out.
        """,
    )
    parser.add_argument(
        "--map",
        type=str,
        default=env.get_as("DVLN_MAP", "path_str"),
        help="Map file (empty: packaged demo map). " + default_help("DVLN_MAP", "path_str"),
    )
    parser.add_argument(
        "--dataset",
        type=str,
        default=env.get_as("DVLN_DATASET", "path_str"),
        help="Episode dataset (JSON). " + default_help("DVLN_DATASET", "path_str"),
    )
    parser.add_argument(
        "--policy",
        choices=POLICY_NAMES,
        default=env.get_as("DVLN_POLICY", str, "oracle"),
        help="Policy to evaluate. " + default_help("DVLN_POLICY"),
    )
    parser.add_argument(
        "--weights",
        type=str,
        default=env.get_as("DVLN_WEIGHTS", "path_str"),
        help="Weight file for seq2seq, cma or rdp (seeded weights when unset). "
        + default_help("DVLN_WEIGHTS", "path_str"),
    )
    parser.add_argument(
        "--controller",
        choices=[k.value for k in ControllerKind],
        default=env.get_as("DVLN_CONTROLLER", str, "flash"),
        help="Motion controller. " + default_help("DVLN_CONTROLLER"),
    )
    parser.add_argument(
        "--profile",
        choices=[k.value for k in ProfileKind],
        default=env.get_as("DVLN_PROFILE", str, "flash"),
        help="Robot profile. " + default_help("DVLN_PROFILE"),
    )
    parser.add_argument(
        "--profile-set",
        type=parse_assignment,
        action="append",
        default=[],
        metavar="FIELD=VALUE",
        help="Override one profile field (repeatable), e.g. --profile-set camera_height=0.8",
    )
    parser.add_argument(
        "--lighting",
        choices=[k.value for k in LightingKind],
        default=env.get_as("DVLN_LIGHTING", str, "DL5000"),
        help="Lighting regime. " + default_help("DVLN_LIGHTING"),
    )
    parser.add_argument(
        "--max-steps",
        type=int,
        default=env.get_as("DVLN_MAX_STEPS", int, 200),
        help="Steps before an episode times out. " + default_help("DVLN_MAX_STEPS", int),
    )
    parser.add_argument(
        "--success-radius",
        type=float,
        default=env.get_as("DVLN_SUCCESS_RADIUS", float, 3.0),
        help="Stop distance counted as success, meters. "
        + default_help("DVLN_SUCCESS_RADIUS", float),
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=env.get_as("DVLN_WORKERS", int, 1),
        help="Parallel worker processes. " + default_help("DVLN_WORKERS", int),
    )
    parser.add_argument(
        "-o",
        "--out",
        type=str,
        default=env.get_as("DVLN_OUT", "path_str"),
        help="Output directory. " + default_help("DVLN_OUT", "path_str"),
    )
    parser.add_argument("--no-progress", action="store_true", help="Hide the progress bar")
    add_common_arguments(parser)
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    seed = require_seed(parser, args.seed)
    if not args.dataset:
        parser.error("a dataset is required: pass --dataset or set DVLN_DATASET")
    if not args.out:
        parser.error("an output directory is required: pass --out or set DVLN_OUT")
    if args.max_steps < 1 or args.workers < 1 or args.success_radius <= 0:
        parser.error("--max-steps and --workers must be >= 1 and --success-radius > 0")

    sim = SimConfig.from_env(env)
    try:
        settings = EvalSettings(
            policy=args.policy,
            controller=ControllerKind(args.controller),
            profile=sim.profile(args.profile, dict(args.profile_set)),
            lighting=sim.lighting(args.lighting),
            seed=seed,
            max_steps=args.max_steps,
            success_radius=args.success_radius,
            weights=Path(args.weights).expanduser() if args.weights else None,
            observation=sim.observation,
            limits=sim.limits,
            navigator=sim.navigator,
            rdp=sim.rdp,
        )
    except DeskVlnError as e:
        parser.error(str(e))
    map_file = map_path(args.map)
    print_run_config(
        "eval",
        {
            "map": map_file,
            "dataset": args.dataset,
            "policy": settings.policy,
            "weights": settings.weights or "(seeded)",
            "controller": settings.controller.value,
            "profile": settings.profile.kind.value,
            "lighting": settings.lighting.kind.value,
            "seed": seed,
            "max_steps": settings.max_steps,
            "success_radius": settings.success_radius,
            "workers": args.workers,
            "out": args.out,
        },
    )
    try:
        paths = cmd_eval(
            map_file, args.dataset, settings, args.out, args.workers, not args.no_progress
        )
    except (DeskVlnError, FileNotFoundError) as e:
        if args.verbose:
            raise
        print(f"error: {e}", file=sys.stderr)
        sys.exit(1)
    print(paths[TABLE_TXT].read_text(encoding="utf-8"), end="")
    print(f"Results in {Path(args.out)}", file=sys.stderr)


if __name__ == "__main__":
    main()
