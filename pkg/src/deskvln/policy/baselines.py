"""
Reference agents: a random walker and a shortest-path oracle.
"""
import math
from typing import TYPE_CHECKING

import numpy as np

from deskvln.control.commands import (
    FORWARD,
    STOP,
    TURN_ANGLE_DEG,
    TURN_LEFT,
    TURN_RIGHT,
    DiscreteAction,
)
from deskvln.embodiment.pose import PoseState, normalize_angle
from deskvln.errors import NoPath, Unreachable
from deskvln.plan.astar import NEIGHBORS
from deskvln.plan.costgrid import PlannerConfig, plan_costs
from deskvln.plan.geodesic import distance_field, geodesic_distance
from deskvln.policy.base import Policy
from deskvln.utils.seeding import as_generator
from deskvln.utils.typehints import Meters, Point, Seed
from deskvln.world.gridmap import GridMap

if TYPE_CHECKING:
    from deskvln.bench.episode import Episode

STOP_PROBABILITY = 0.02
MOVES = (FORWARD, TURN_LEFT, TURN_RIGHT)
LOOKAHEAD = 0.5
SUCCESS_RADIUS = 3.0


def random_policy_step(
    rng_seed: Seed, stop_probability: float = STOP_PROBABILITY
) -> DiscreteAction:
    """Stop with stop_probability, otherwise a uniform choice of forward, left or right."""
    rng = as_generator(rng_seed)
    if rng.random() < stop_probability:
        return STOP
    return MOVES[int(rng.integers(len(MOVES)))]


def goal_field(grid: GridMap, goal: Point, planner: PlannerConfig = PlannerConfig()) -> np.ndarray:
    """Dilated-cost distance (in cells) from every cell to the goal cell."""
    return distance_field(plan_costs(grid, planner), grid.world_to_cell(*goal), to_source=True)


def lookahead_point(
    grid: GridMap, pose: PoseState, goal: Point, field: np.ndarray, lookahead: Meters = LOOKAHEAD
) -> Point:
    """
    Walk down field from the pose cell until a cell center lies lookahead meters away
    (or the goal cell is reached) and return that point.

    Raises:
        NoPath: the pose cell cannot reach the goal
    """
    r, c = grid.world_to_cell(pose.x, pose.y)
    if not math.isfinite(field[r, c]):
        raise NoPath(f"no path from ({pose.x:.2f}, {pose.y:.2f}) to the goal")
    height, width = field.shape
    while field[r, c] > 0:
        best = None
        for dr, dc, _ in NEIGHBORS:
            nr, nc = r + dr, c + dc
            if not (0 <= nr < height and 0 <= nc < width):
                continue
            corners = (field[r + dr, c], field[r, c + dc])
            if dr and dc and not all(math.isfinite(v) for v in corners):
                continue
            if best is None or field[nr, nc] < field[best]:
                best = (nr, nc)
        if best is None or not field[best] < field[r, c]:
            break
        r, c = best
        point = grid.cell_center(r, c)
        if math.dist(point, pose.position) >= lookahead:
            return point
    return tuple(goal)


def oracle_policy_step(
    episode: "Episode",
    pose: PoseState,
    grid: GridMap,
    field: np.ndarray | None = None,
    success_radius: Meters = SUCCESS_RADIUS,
    lookahead: Meters = LOOKAHEAD,
) -> DiscreteAction:
    """
    Shortest-path follower: Stop once the geodesic distance to the goal is within
    success_radius, otherwise turn toward the lookahead point on the dilated-cost path
    (left when the heading error is >= 0) or move forward when within half a turn.

    Raises:
        NoPath: the goal cannot be reached from pose
    """
    goal = episode.goal
    try:
        if geodesic_distance(grid, pose.position, goal) <= success_radius:
            return STOP
    except Unreachable as e:
        raise NoPath(str(e)) from None
    if field is None:
        field = goal_field(grid, goal)
    target = lookahead_point(grid, pose, goal, field, lookahead)
    error = normalize_angle(math.atan2(target[1] - pose.y, target[0] - pose.x) - pose.heading)
    if abs(error) > math.radians(TURN_ANGLE_DEG / 2):
        return TURN_LEFT if error >= 0 else TURN_RIGHT
    return FORWARD


class RandomPolicy(Policy):
    name = "random"
    needs_observation = False

    def __init__(self, stop_probability: float = STOP_PROBABILITY):
        self.stop_probability = stop_probability
        self.rng = as_generator(None)

    def reset(self, episode, grid, rng_seed=None):
        self.rng = as_generator(rng_seed)

    def act(self, obs, pose):
        return random_policy_step(self.rng, self.stop_probability)


class OraclePolicy(Policy):
    """Follows the dilated-cost shortest path to the episode goal."""

    name = "oracle"
    needs_observation = False

    def __init__(
        self,
        success_radius: Meters = SUCCESS_RADIUS,
        planner: PlannerConfig = PlannerConfig(),
        lookahead: Meters = LOOKAHEAD,
    ):
        self.success_radius = success_radius
        self.planner = planner
        self.lookahead = lookahead
        self.episode: "Episode | None" = None
        self.grid: GridMap | None = None
        self.field: np.ndarray | None = None

    def reset(self, episode, grid, rng_seed=None):
        self.episode = episode
        self.grid = grid
        self.field = goal_field(grid, episode.goal, self.planner)

    def act(self, obs, pose):
        return oracle_policy_step(
            self.episode, pose, self.grid, self.field, self.success_radius, self.lookahead
        )
