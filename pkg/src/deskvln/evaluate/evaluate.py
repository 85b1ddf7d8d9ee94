"""
Batch evaluation: run a policy over a dataset and write the result files.
"""
import logging
from pathlib import Path

from deskvln.bench.episode import load_episodes
from deskvln.bench.metrics import compute_metrics
from deskvln.bench.results import write_results
from deskvln.bench.runner import EvalSettings, evaluate
from deskvln.world.gridmap import load_map_file

logger = logging.getLogger(__name__)


def run_description(settings: EvalSettings, map_file: Path, dataset: Path) -> dict:
    """The run section of aggregate.json."""
    return {
        "policy": settings.policy,
        "profile": settings.profile.kind.value,
        "controller": settings.controller.value,
        "lighting": settings.lighting.kind.value,
        "seed": settings.seed,
        "max_steps": settings.max_steps,
        "success_radius": settings.success_radius,
        "map": str(Path(map_file).resolve()),
        "dataset": str(Path(dataset).resolve()),
    }


def cmd_eval(
    map_file: str | Path,
    dataset: str | Path,
    settings: EvalSettings,
    out: str | Path,
    workers: int = 1,
    progress: bool = True,
) -> dict[str, Path]:
    """
    Run settings.policy on every episode in dataset and write episodes.csv,
    aggregate.json, table.txt and traces.jsonl into out.

    Episode failures are recorded in the traces; only unreadable inputs raise.

    Raises:
        FileNotFoundError: map or dataset missing
        ParseError, ValidationError, SchemaMismatch: invalid map or dataset
    """
    map_file, dataset = Path(map_file), Path(dataset)
    grid = load_map_file(map_file)
    if not dataset.exists():
        raise FileNotFoundError(f"Dataset not found: {dataset}")
    episodes = load_episodes(dataset)
    traces = evaluate(episodes, grid, settings, workers, progress)
    report = compute_metrics(traces, episodes, grid, settings.success_radius)
    paths = write_results(out, report, traces, run_description(settings, map_file, dataset))
    logger.info("evaluated %d episodes into %s", len(episodes), out)
    return paths
