"""
Episode metrics: trajectory length (TL), navigation error (NE), success (SR), oracle
success (OS), success weighted by path length (SPL), fall rate (FR) and stuck rate (StR).

Distances to the goal are geodesic; a pose whose cell cannot reach the goal falls back
to the straight-line distance.
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence

import numpy as np

from deskvln.bench.episode import Episode
from deskvln.control.rollout import EpisodeTrace, EventKind
from deskvln.errors import BlockedCell, LengthMismatch, ValidationError
from deskvln.plan.geodesic import geodesic_field
from deskvln.utils.typehints import Meters, Point
from deskvln.world.gridmap import GridMap

logger = logging.getLogger(__name__)

SUCCESS_RADIUS = 3.0
TABLE_COLUMNS = ("TL", "NE", "FR", "StR", "OS", "SR", "SPL")


@dataclass(frozen=True)
class EpisodeMetrics:
    episode_id: str
    tl: Meters
    ne: Meters
    success: int
    oracle_success: int
    spl: float
    fell: int
    stuck: int
    terminal: str
    steps: int

    def to_row(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MetricsReport:
    """Per-episode metrics and their batch aggregates (rates in percent)."""

    episodes: tuple[EpisodeMetrics, ...]

    def _mean(self, values) -> float:
        values = list(values)
        return math.fsum(values) / len(values) if values else 0.0

    def _percent(self, values) -> float:
        return 100.0 * self._mean(values)

    def aggregate(self) -> dict[str, float]:
        """Batch metrics keyed by TABLE_COLUMNS, in that order."""
        e = self.episodes
        return {
            "TL": self._mean(m.tl for m in e),
            "NE": self._mean(m.ne for m in e),
            "FR": self._percent(m.fell for m in e),
            "StR": self._percent(m.stuck for m in e),
            "OS": self._percent(m.oracle_success for m in e),
            "SR": self._percent(m.success for m in e),
            "SPL": self._percent(m.spl for m in e),
        }


class GoalDistance:
    """Distance from any point to one goal, geodesic where connected."""

    def __init__(self, grid: GridMap, goal: Point):
        self.grid = grid
        self.goal = tuple(goal)
        try:
            self.field = geodesic_field(grid).field_from(goal)
        except BlockedCell:
            logger.warning("goal (%.2f, %.2f) is inside an obstacle", *goal)
            self.field = np.full(grid.cells.shape, math.inf)

    def __call__(self, point: Point) -> Meters:
        d = float(self.field[self.grid.world_to_cell(*point)])
        if math.isfinite(d):
            return d
        logger.debug("(%.2f, %.2f) cannot reach the goal; using straight-line distance", *point)
        return math.dist(point, self.goal)


def episode_metrics(
    trace: EpisodeTrace,
    episode: Episode,
    grid: GridMap,
    success_radius: Meters = SUCCESS_RADIUS,
) -> EpisodeMetrics:
    to_goal = GoalDistance(grid, episode.goal)
    tl = trace.path_length()
    ne = to_goal(trace.final_pose.position)
    terminal = trace.terminal
    success = int(terminal is not None and terminal.kind is EventKind.STOP and ne <= success_radius)
    oracle = int(any(to_goal(p.position) <= success_radius for p in trace.poses))
    shortest = to_goal(episode.start[:2])
    longest = max(shortest, tl)
    spl = success * (shortest / longest if longest > 0 else 1.0)
    return EpisodeMetrics(
        episode_id=episode.episode_id,
        tl=tl,
        ne=ne,
        success=success,
        oracle_success=oracle,
        spl=spl,
        fell=int(trace.has(EventKind.FALL)),
        stuck=int(trace.has(EventKind.STUCK)),
        terminal=terminal.kind.value if terminal else "",
        steps=trace.steps,
    )


def compute_metrics(
    traces: Sequence[EpisodeTrace],
    episodes: Sequence[Episode],
    grids: GridMap | Mapping[str, GridMap],
    success_radius: Meters = SUCCESS_RADIUS,
) -> MetricsReport:
    """
    Args:
        traces: One trace per episode, in the same order
        episodes: The episodes that were run
        grids: The map, or maps by scene_id
        success_radius: Stop radius counted as success, meters

    Raises:
        LengthMismatch: traces and episodes differ in length
        ValidationError: an episode's scene is not among grids
    """
    if len(traces) != len(episodes):
        raise LengthMismatch(f"{len(traces)} traces for {len(episodes)} episodes")
    rows = []
    for trace, episode in zip(traces, episodes):
        if isinstance(grids, GridMap):
            grid = grids
        elif episode.scene_id in grids:
            grid = grids[episode.scene_id]
        else:
            raise ValidationError(f"no map for scene {episode.scene_id!r}")
        rows.append(episode_metrics(trace, episode, grid, success_radius))
    return MetricsReport(tuple(rows))
