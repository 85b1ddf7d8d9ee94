"""
Dataset generation: sample episodes on a map and write them with a manifest.
"""
import dataclasses
import hashlib
import json
import logging
from collections import Counter
from pathlib import Path

from deskvln.bench.episode import DATASET_SCHEMA_VERSION, SPLITS_ORDER, dump_episodes
from deskvln.bench.sampling import SamplingConfig, sample_episodes
from deskvln.world.gridmap import dump_map, load_map_file

logger = logging.getLogger(__name__)

EPISODES_FILE = "episodes.json"
MANIFEST_FILE = "manifest.json"


def config_hash(map_text: str, n: int, seed: int, sampling: SamplingConfig) -> str:
    """sha256 over the canonical map text and every generation setting."""
    payload = {
        "map": map_text,
        "n": n,
        "seed": seed,
        "sampling": dataclasses.asdict(sampling),
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()


def cmd_generate(
    map_file: str | Path,
    n: int,
    seed: int,
    out: str | Path,
    sampling: SamplingConfig = SamplingConfig(),
) -> tuple[Path, Path]:
    """
    Sample n episodes on map_file and write episodes.json and manifest.json into out.

    Nothing is written unless sampling succeeds.

    Raises:
        FileNotFoundError: map_file does not exist
        ParseError, ValidationError: the map is invalid
        InsufficientFreeSpace: the map has no connected free space
    """
    grid = load_map_file(map_file)
    episodes = sample_episodes(grid, n, sampling, seed)
    counts = Counter(e.split.value for e in episodes)
    manifest = {
        "schema_version": DATASET_SCHEMA_VERSION,
        "map": str(Path(map_file).expanduser().resolve()),
        "scene_id": grid.scene_id,
        "seed": seed,
        "requested": n,
        "episodes": len(episodes),
        "counts": {split: counts.get(split, 0) for split in SPLITS_ORDER},
        "config_hash": config_hash(dump_map(grid), n, seed, sampling),
    }
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    episodes_path = out / EPISODES_FILE
    manifest_path = out / MANIFEST_FILE
    episodes_path.write_text(dump_episodes(episodes), encoding="utf-8")
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    logger.info("wrote %d episodes to %s", len(episodes), episodes_path)
    return episodes_path, manifest_path
