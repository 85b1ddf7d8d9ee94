"""
Subgoal program execution on top of the semantic map.

Each object subgoal is resolved by indexing the semantic map, or by a turn-around
scan followed by frontier exploration until the object shows up. Forward motions
first pick a reorientation node. Every leg is planned with A* on the dilated cost
grid (with the unexplored penalty) and executed waypoint by waypoint through the
rollout, observing after each step.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from deskvln.control.commands import (
    ActionKind,
    ControlLimits,
    ControllerKind,
    DiscreteAction,
)
from deskvln.control.rollout import EpisodeTrace, EventKind, Rollout
from deskvln.embodiment.pose import PoseState
from deskvln.embodiment.profile import RobotProfile
from deskvln.errors import EmptyCandidates, NoFrontiers, NoPath
from deskvln.plan.costgrid import PlannerConfig, plan_costs
from deskvln.plan.paths import plan_path, resample_path
from deskvln.plan.reorient import REORIENT_ALPHA, reorient_candidates, select_reorient_node
from deskvln.semnav.affinity import AffinityTable, default_affinity
from deskvln.semnav.explore import PEEK_RANGE, explore_step
from deskvln.semnav.program import (
    MoveForward,
    MoveInBetween,
    MoveToObject,
    MoveToRoom,
    Stop,
    Subgoal,
    SubgoalProgram,
    Turn,
)
from deskvln.semnav.rooms import ROOM_THRESHOLD, classify_room
from deskvln.semnav.semantic_map import (
    DETECTION_THRESHOLD,
    SemanticMap,
    index_landmark,
    integrate_observation,
)
from deskvln.utils.seeding import as_generator
from deskvln.utils.typehints import Cell, Degrees, Meters, Point, Seed
from deskvln.world.gridmap import GridMap
from deskvln.world.lighting import LightingCondition, LightingKind, make_lighting
from deskvln.world.observe import ObservationConfig, observe

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NavigatorConfig:
    """
    Attributes:
        planner: Dilation and penalty costs for A*
        observation: Camera model used while navigating
        detection_threshold: Peak score an indexed landmark needs
        room_threshold: Minimum mean affinity for a room label
        reorient_alpha: Turn-angle weight of the reorientation cost
        step_length: Waypoint spacing along planned paths; one waypoint per step
        scan_turns: Turns in a turn-around scan
        scan_turn_deg: Angle of each scan turn
        peek_range: Reach of the simulated look-around when scoring frontiers
        visit_radius: Frontier cells this close to a visited frontier count as visited
        approach_radius: Object goals are reached once this close
        max_replans: Collision-triggered replans per leg
    """

    planner: PlannerConfig = PlannerConfig()
    observation: ObservationConfig = ObservationConfig()
    detection_threshold: float = DETECTION_THRESHOLD
    room_threshold: float = ROOM_THRESHOLD
    reorient_alpha: float = REORIENT_ALPHA
    step_length: Meters = 0.25
    scan_turns: int = 8
    scan_turn_deg: Degrees = 45.0
    peek_range: Meters = PEEK_RANGE
    visit_radius: Meters = 1.0
    approach_radius: Meters = 0.5
    max_replans: int = 10


class ProgramExecutor:
    """
    Runs subgoal programs through an existing Rollout.

    Args:
        rollout: Episode being driven; its grid, profile and controller are used
        lighting: Lighting for the observations taken along the way
        rng_seed: Seed or Generator for observation noise
        config: Navigator settings
        table: Affinity table (packaged default when None)
    """

    def __init__(
        self,
        rollout: Rollout,
        lighting: LightingCondition | None = None,
        rng_seed: Seed = None,
        config: NavigatorConfig = NavigatorConfig(),
        table: AffinityTable | None = None,
    ):
        self.rollout = rollout
        self.grid: GridMap = rollout.grid
        self.lighting = lighting or make_lighting(LightingKind.DL5000)
        self.rng = as_generator(rng_seed)
        self.config = config
        self.table = table or default_affinity()
        self.smap = SemanticMap.empty(self.grid)
        self.visited: set[Cell] = set()
        self.last_seen: list[str] = []

    @property
    def pose(self) -> PoseState:
        return self.rollout.pose

    @property
    def done(self) -> bool:
        return self.rollout.done

    def run(self, program: SubgoalProgram) -> EpisodeTrace:
        """Execute program; planning and exploration failures end the episode with a reason."""
        vocabulary = sorted(set(self.grid.vocabulary) | set(program.labels()))
        self.smap = SemanticMap.empty(self.grid, tuple(vocabulary))
        self.visited = set()
        self._sense()
        for subgoal in program:
            if self.done:
                break
            try:
                self._run_subgoal(subgoal)
            except (NoPath, NoFrontiers) as e:
                logger.info("episode %s failed: %s", self.rollout.trace.episode_id, e)
                self.rollout.stop(reason=str(e))
                break
        return self.rollout.trace

    def _run_subgoal(self, subgoal: Subgoal) -> None:
        logger.debug("subgoal %s at step %d", subgoal, self.rollout.steps)
        if isinstance(subgoal, Stop):
            self.rollout.stop()
        elif isinstance(subgoal, Turn):
            self._turn(subgoal.degrees)
        elif isinstance(subgoal, MoveForward):
            self._move_forward(subgoal.meters)
        elif isinstance(subgoal, MoveToObject):
            cell = self._locate(subgoal.label)
            if cell is not None:
                self._navigate(self.grid.cell_center(*cell), self.config.approach_radius)
        elif isinstance(subgoal, MoveInBetween):
            self._move_in_between(subgoal.first, subgoal.second)
        elif isinstance(subgoal, MoveToRoom):
            self._move_to_room(subgoal.room)
        else:
            raise TypeError(f"unknown subgoal {subgoal!r}")

    def _sense(self) -> list[str]:
        obs = observe(
            self.grid,
            self.pose,
            self.rollout.profile,
            self.lighting,
            self.rng,
            self.config.observation,
        )
        integrate_observation(self.smap, obs, self.pose)
        self.last_seen = obs.visible_names()
        return self.last_seen

    def _turn(self, degrees: Degrees) -> None:
        remaining = degrees
        while abs(remaining) > 1e-9 and not self.done:
            chunk = max(-180.0, min(180.0, remaining))
            kind = ActionKind.TURN_LEFT if chunk > 0 else ActionKind.TURN_RIGHT
            self.rollout.act(DiscreteAction(kind, abs(chunk)))
            self._sense()
            remaining -= chunk

    def _scan(self) -> list[str]:
        """Turn-around scan; returns the distinct label names seen along the way."""
        seen = set(self.last_seen)
        for _ in range(self.config.scan_turns):
            if self.done:
                break
            self.rollout.act(DiscreteAction(ActionKind.TURN_LEFT, self.config.scan_turn_deg))
            seen.update(self._sense())
        return sorted(seen)

    def _costs(self):
        return plan_costs(self.grid, self.config.planner, self.smap.explored)

    def _navigate(self, target: Point, stop_within: Meters = 0.0) -> bool:
        """
        Follow A* paths to target, replanning after collisions. True when the leg
        finished, False when the episode ended or the replan budget ran out.

        Raises:
            NoPath: target is unreachable under the current costs
        """
        for _ in range(self.config.max_replans + 1):
            if self.done:
                return False
            if math.dist(self.pose.position, target) <= stop_within:
                return True
            path = plan_path(self.grid, self.pose.position, target, self._costs())
            waypoints = resample_path(path, self.config.step_length)
            if stop_within > 0:
                for i, waypoint in enumerate(waypoints):
                    if math.dist(waypoint, target) <= stop_within:
                        waypoints = waypoints[: i + 1]
                        break
            collided = False
            for waypoint in waypoints:
                events_before = len(self.rollout.trace.events)
                self.rollout.move_to(waypoint)
                self._sense()
                if self.done:
                    return False
                new_events = self.rollout.trace.events[events_before:]
                if any(e.kind is EventKind.COLLISION for e in new_events):
                    collided = True
                    break
            if not collided:
                return True
            logger.debug("collision at step %d; replanning", self.rollout.steps)
        logger.info("giving up on leg to (%.2f, %.2f) after repeated collisions", *target)
        return False

    def _mark_visited(self, frontier: Cell) -> None:
        cs = self.grid.cell_size
        span = int(math.ceil(self.config.visit_radius / cs))
        r0, c0 = frontier
        for r in range(r0 - span, r0 + span + 1):
            for c in range(c0 - span, c0 + span + 1):
                if math.hypot(r - r0, c - c0) * cs <= self.config.visit_radius:
                    self.visited.add((r, c))

    def _explore_once(self, target: str) -> list[str]:
        """Visit the best frontier for target and scan there."""
        frontier = explore_step(
            self.smap,
            self.pose,
            target,
            self.table,
            self.grid,
            self.visited,
            self.config.peek_range,
        )
        self._mark_visited(frontier)
        self._navigate(self.grid.cell_center(*frontier))
        return self._scan()

    def _locate(self, label: str) -> Cell | None:
        """
        Index label, exploring until it is found. None when the episode ended first.

        Raises:
            NoFrontiers: exploration ran out before the label was found
        """
        threshold = self.config.detection_threshold
        cell = index_landmark(self.smap, label, threshold)
        if cell is None and not self.done:
            self._scan()
            cell = index_landmark(self.smap, label, threshold)
        while cell is None and not self.done:
            self._explore_once(label)
            cell = index_landmark(self.smap, label, threshold)
        return cell

    def _move_in_between(self, first: str, second: str) -> None:
        a = self._locate(first)
        if a is None:
            return
        b = self._locate(second)
        if b is None:
            return
        pa, pb = self.grid.cell_center(*a), self.grid.cell_center(*b)
        midpoint = ((pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2)
        costs = self._costs()
        if costs.blocked(self.grid.world_to_cell(*midpoint)):
            free = np.argwhere(np.isfinite(costs.costs))
            centers = (free[:, ::-1] + 0.5) * self.grid.cell_size
            nearest = free[int(np.argmin(((centers - midpoint) ** 2).sum(axis=1)))]
            midpoint = self.grid.cell_center(int(nearest[0]), int(nearest[1]))
        self._navigate(midpoint)

    def _room_landmark(self, room: str) -> Cell | None:
        labels = self.smap.indexed_labels(self.config.detection_threshold)
        scored = [(self.table.affinity(label, room), label) for label in labels]
        scored = [(s, label) for s, label in scored if s >= self.config.room_threshold]
        if not scored:
            return None
        best = max(scored, key=lambda item: item[0])[1]
        return index_landmark(self.smap, best, self.config.detection_threshold)

    def _move_to_room(self, room: str) -> None:
        def classify(names):
            return classify_room(names, table=self.table, threshold=self.config.room_threshold)

        seen = self.last_seen
        while classify(seen) != room and not self.done:
            cell = self._room_landmark(room)
            if cell is not None:
                self._navigate(self.grid.cell_center(*cell), self.config.approach_radius)
                return
            seen = self._explore_once(room)

    def _move_forward(self, meters: Meters) -> None:
        pose = self.pose
        goal = (pose.x + meters * math.cos(pose.heading), pose.y + meters * math.sin(pose.heading))
        candidates = reorient_candidates(self.grid, pose, meters, self._costs())
        try:
            cell = select_reorient_node(
                candidates, pose.position, goal, alpha_weight=self.config.reorient_alpha
            )
        except EmptyCandidates:
            logger.info("no reorientation node within %.2fm; skipping move_forward", meters)
            return
        self._navigate(self.grid.cell_center(*cell))


def execute_program(
    program: SubgoalProgram,
    grid: GridMap,
    pose: PoseState,
    profile: RobotProfile,
    controller: ControllerKind = ControllerKind.FLASH,
    *,
    lighting: LightingCondition | None = None,
    rng_seed: Seed = None,
    config: NavigatorConfig = NavigatorConfig(),
    table: AffinityTable | None = None,
    limits: ControlLimits = ControlLimits(),
    max_steps: int = 200,
    episode_id: str = "",
) -> EpisodeTrace:
    """
    Run a subgoal program from pose in a fresh rollout and return its trace.

    NoPath and NoFrontiers do not propagate: they end the episode with a Stop event and
    set the trace's failure_reason.
    """
    rng = as_generator(rng_seed)
    rollout = Rollout(
        grid,
        pose,
        profile,
        controller,
        rng,
        limits=limits,
        max_steps=max_steps,
        episode_id=episode_id,
    )
    return ProgramExecutor(rollout, lighting, rng, config, table).run(program)
