"""
Episode generation: sample start-goal pairs on a map's free space and keep the ones
that pass the length and similarity filters.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from deskvln.bench.episode import Episode, Split
from deskvln.bench.instructions import LANDMARK_RADIUS, TURN_THRESHOLD_DEG, describe_path
from deskvln.errors import InsufficientFreeSpace, NoPath, ValidationError
from deskvln.plan.costgrid import PlannerConfig, plan_costs
from deskvln.plan.geodesic import geodesic_field
from deskvln.plan.paths import plan_path
from deskvln.utils.seeding import as_generator
from deskvln.utils.typehints import Degrees, Meters, Point, Seed
from deskvln.world.gridmap import GridMap

logger = logging.getLogger(__name__)

SPLITS = (Split.TRAIN, Split.VAL_SEEN, Split.VAL_UNSEEN)


@dataclass(frozen=True)
class SamplingConfig:
    """
    Attributes:
        min_len: Shortest accepted start-goal geodesic, meters
        max_len: Longest accepted start-goal geodesic, meters
        similarity_radius: A pair is rejected when its start and its goal are both this
            close to those of an accepted pair
        attempts_per_episode: Sampling attempts allowed per requested episode
        split_weights: Draw weights for train, val_seen and val_unseen
        turn_threshold: Heading change that starts a new instruction leg, degrees
        landmark_radius: How close to the goal a landmark must be to be named
        planner: Cost settings for the reference path
    """

    min_len: Meters = 6.0
    max_len: Meters = 15.0
    similarity_radius: Meters = 1.0
    attempts_per_episode: int = 50
    split_weights: tuple[float, float, float] = (0.7, 0.15, 0.15)
    turn_threshold: Degrees = TURN_THRESHOLD_DEG
    landmark_radius: Meters = LANDMARK_RADIUS
    planner: PlannerConfig = PlannerConfig()

    def __post_init__(self):
        if not 0 <= self.min_len <= self.max_len:
            raise ValidationError(
                f"need 0 <= min_len <= max_len, got {self.min_len} and {self.max_len}"
            )
        if self.attempts_per_episode < 1:
            raise ValidationError("attempts_per_episode must be >= 1")
        weights = self.split_weights
        if len(weights) != 3 or min(weights) < 0 or not sum(weights):
            raise ValidationError(f"bad split weights {self.split_weights}")


def reachable_free_cells(grid: GridMap) -> np.ndarray:
    """(n, 2) free cells whose traversable component holds at least one other free cell."""
    components, _ = ndimage.label(grid.traversable_mask(), structure=np.ones((3, 3)))
    free = grid.free_mask()
    ids = components[free]
    counts = np.bincount(ids, minlength=components.max() + 1)
    keep = free & (counts[components] >= 2)
    return np.argwhere(keep)


def _similar(a: Episode, start: Point, goal: Point, radius: Meters) -> bool:
    return math.dist(a.start[:2], start) <= radius and math.dist(a.goal, goal) <= radius


def sample_episodes(
    grid: GridMap,
    n: int,
    config: SamplingConfig = SamplingConfig(),
    rng_seed: Seed = None,
) -> list[Episode]:
    """
    Sample up to n valid episodes on grid.

    Starts and goals are free-cell centers; start headings are uniform. A pair is kept
    when its geodesic length lies in [min_len, max_len], it is not similar to an
    accepted pair and the dilated-cost planner finds a reference path. Fewer than n
    episodes are returned (with a warning) once n * attempts_per_episode pairs have been
    drawn.

    Raises:
        InsufficientFreeSpace: no two free cells are connected
    """
    cells = reachable_free_cells(grid)
    if len(cells) < 2:
        raise InsufficientFreeSpace(
            f"scene {grid.scene_id} has {len(cells)} connected free cells, need 2"
        )
    rng = as_generator(rng_seed)
    fields = geodesic_field(grid)
    costs = plan_costs(grid, config.planner)
    weights = np.asarray(config.split_weights, dtype=float)
    weights = weights / weights.sum()
    episodes: list[Episode] = []
    attempts = 0
    while len(episodes) < n and attempts < n * config.attempts_per_episode:
        attempts += 1
        i, j = rng.integers(len(cells), size=2)
        heading = float(rng.uniform(-math.pi, math.pi))
        start = grid.cell_center(*cells[i])
        goal = grid.cell_center(*cells[j])
        length = float(fields.field_from(start)[tuple(cells[j])])
        if not config.min_len <= length <= config.max_len:
            continue
        if any(_similar(e, start, goal, config.similarity_radius) for e in episodes):
            continue
        try:
            path = plan_path(grid, start, goal, costs)
        except NoPath:
            continue
        text, program = describe_path(
            grid, path, heading, config.turn_threshold, config.landmark_radius
        )
        split = SPLITS[int(rng.choice(len(SPLITS), p=weights))]
        episodes.append(
            Episode(
                episode_id=f"{grid.scene_id}-{len(episodes):04d}",
                scene_id=grid.scene_id,
                start=(*start, heading),
                goal=goal,
                reference_path=tuple(path),
                instruction_text=text,
                subgoals=program,
                split=split,
            )
        )
    if len(episodes) < n:
        logger.warning(
            "scene %s: only %d of %d episodes after %d attempts",
            grid.scene_id,
            len(episodes),
            n,
            attempts,
        )
    return episodes
