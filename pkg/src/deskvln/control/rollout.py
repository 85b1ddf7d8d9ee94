"""
Episode rollouts: one robot, one map, one trace.

A Rollout executes agent decisions through the selected controller. Each decision
(a discrete action, a waypoint, or a batch of velocity commands) is one step. Speed
and path controllers run in control ticks of at most dt; every tick applies the
disturbance model and checks for a fall, and every step ends with the stuck check.
The flash controller teleports and skips all of that.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

from deskvln.control.commands import (
    ActionKind,
    ControlLimits,
    ControllerKind,
    DiscreteAction,
    VelocityCommand,
)
from deskvln.control.discrete import discrete_to_commands, rotate_then_translate
from deskvln.control.kinematics import diff_drive_step, flash_step, speed_step
from deskvln.control.pid import CAPTURE_RADIUS, PidFollower, PidGains
from deskvln.embodiment.detectors import STUCK_WINDOW, StuckWindow, check_fall, check_stuck
from deskvln.embodiment.pose import PoseState, normalize_angle
from deskvln.embodiment.profile import RobotProfile
from deskvln.errors import AlreadyFallen, SchemaMismatch, TargetInObstacle
from deskvln.utils.seeding import as_generator
from deskvln.utils.typehints import Meters, Point, Seed
from deskvln.world.gridmap import GridMap

logger = logging.getLogger(__name__)

TRACE_SCHEMA_VERSION = 1
PATH_GOAL_TOLERANCE = 0.05


class EventKind(str, Enum):
    COLLISION = "collision"
    FALL = "fall"
    STUCK = "stuck"
    STOP = "stop"
    TIMEOUT = "timeout"


TERMINAL_EVENTS = frozenset({EventKind.FALL, EventKind.STUCK, EventKind.STOP, EventKind.TIMEOUT})


@dataclass(frozen=True)
class TraceEvent:
    kind: EventKind
    step: int
    detail: str = ""


@dataclass
class EpisodeTrace:
    """
    Everything that happened in one episode.

    poses[0] is the start pose and poses[k] the pose after step k, so the trace has
    len(poses) - 1 steps. actions[k - 1] names the decision executed in step k.
    """

    episode_id: str
    poses: list[PoseState]
    events: list[TraceEvent] = field(default_factory=list)
    actions: list[str] = field(default_factory=list)
    failure_reason: str | None = None

    @property
    def steps(self) -> int:
        return len(self.poses) - 1

    @property
    def final_pose(self) -> PoseState:
        return self.poses[-1]

    @property
    def terminal(self) -> TraceEvent | None:
        for event in self.events:
            if event.kind in TERMINAL_EVENTS:
                return event
        return None

    def has(self, kind: EventKind) -> bool:
        return any(e.kind is kind for e in self.events)

    def path_length(self) -> Meters:
        """Sum of per-step displacements."""
        return math.fsum(
            math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(self.poses, self.poses[1:])
        )

    def to_dict(self) -> dict:
        return {
            "schema_version": TRACE_SCHEMA_VERSION,
            "episode_id": self.episode_id,
            "poses": [[p.x, p.y, p.heading, p.roll, p.pitch] for p in self.poses],
            "events": [
                {"kind": e.kind.value, "step": e.step, "detail": e.detail} for e in self.events
            ],
            "actions": list(self.actions),
            "failure_reason": self.failure_reason,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EpisodeTrace":
        """
        Raises:
            SchemaMismatch: unknown schema version
            KeyError, ValueError, TypeError: malformed trace
        """
        version = data.get("schema_version")
        if version != TRACE_SCHEMA_VERSION:
            raise SchemaMismatch(f"trace schema {version!r}, expected {TRACE_SCHEMA_VERSION}")
        events = [
            TraceEvent(EventKind(e["kind"]), int(e["step"]), e.get("detail", ""))
            for e in data["events"]
        ]
        fall_step = next((e.step for e in events if e.kind is EventKind.FALL), None)
        poses = []
        for i, values in enumerate(data["poses"]):
            x, y, heading, roll, pitch = map(float, values)
            fallen = fall_step is not None and i >= fall_step
            poses.append(PoseState(x, y, heading, roll, pitch, fallen, i))
        if not poses:
            raise ValueError("trace has no poses")
        return cls(
            episode_id=str(data["episode_id"]),
            poses=poses,
            events=events,
            actions=[str(a) for a in data["actions"]],
            failure_reason=data.get("failure_reason"),
        )


class Rollout:
    """
    Step-wise execution of one episode.

    Args:
        grid: World map
        start: Start pose
        profile: Robot profile (disturbance, footprint)
        controller: Flash, speed or path controller
        rng_seed: Seed or Generator for tracking error and disturbance
        limits: Velocity limits and control period
        max_steps: Steps before the episode times out
        gains: PID gains for the path controller
        capture_radius: Waypoint capture radius for the path controller
        episode_id: Copied into the trace
    """

    def __init__(
        self,
        grid: GridMap,
        start: PoseState,
        profile: RobotProfile,
        controller: ControllerKind = ControllerKind.FLASH,
        rng_seed: Seed = None,
        limits: ControlLimits = ControlLimits(),
        max_steps: int = 200,
        gains: PidGains = PidGains(),
        capture_radius: Meters = CAPTURE_RADIUS,
        stuck_window: int = STUCK_WINDOW,
        episode_id: str = "",
    ):
        self.grid = grid
        self.profile = profile
        self.controller = ControllerKind(controller)
        self.rng = as_generator(rng_seed)
        self.limits = limits
        self.max_steps = max_steps
        self.gains = gains
        self.capture_radius = capture_radius
        self.window = StuckWindow(stuck_window)
        self.pose = start.moved(step_index=0)
        self.trace = EpisodeTrace(episode_id, [self.pose])
        self._collided = False
        if max_steps <= 0:
            self._event(EventKind.TIMEOUT, 0)

    @property
    def steps(self) -> int:
        return self.trace.steps

    @property
    def done(self) -> bool:
        return self.trace.terminal is not None

    def _event(self, kind: EventKind, step: int, detail: str = "") -> None:
        self.trace.events.append(TraceEvent(kind, step, detail))

    def _begin_step(self) -> bool:
        if self.pose.fallen:
            raise AlreadyFallen("the robot has fallen; the episode is over")
        if self.done:
            logger.debug("episode %s already ended; ignoring step", self.trace.episode_id)
            return False
        self._collided = False
        return True

    def _end_step(self, name: str) -> None:
        step = self.steps + 1
        self.pose = self.pose.moved(step_index=step)
        self.trace.poses.append(self.pose)
        self.trace.actions.append(name)
        if self.pose.fallen:
            return
        if self.controller is not ControllerKind.FLASH:
            self.window.push(self.pose)
            if check_stuck(self.window):
                self._event(EventKind.STUCK, step)
                return
        if step >= self.max_steps:
            self._event(EventKind.TIMEOUT, step)

    def _tick(self, cmd: VelocityCommand) -> bool:
        """Run one control tick; True when the robot fell."""
        self.pose, collided, _ = speed_step(
            self.pose, cmd, self.profile, self.grid, self.rng, self.limits
        )
        if collided and not self._collided:
            self._collided = True
            self._event(EventKind.COLLISION, self.steps + 1)
        if check_fall(self.pose, self.profile):
            self.pose = self.pose.moved(fallen=True)
            self._event(EventKind.FALL, self.steps + 1)
            return True
        return False

    def _run(self, commands: list[VelocityCommand]) -> None:
        for cmd in commands:
            if self._tick(cmd):
                break

    def _flash(self, target: PoseState) -> None:
        try:
            self.pose = flash_step(self.pose, target, self.grid)
        except TargetInObstacle as e:
            logger.debug("flash target rejected: %s", e)

    def _follow(self, path: list[Point]) -> None:
        tolerance = min(PATH_GOAL_TOLERANCE, self.capture_radius)
        follower = PidFollower(path, self.gains, self.limits, self.capture_radius, tolerance)
        length = math.fsum(math.dist(a, b) for a, b in zip([self.pose.position, *path], path))
        max_ticks = math.ceil(2 * length / (self.limits.v_max * self.limits.dt))
        max_ticks += math.ceil(2 * math.pi / (self.limits.omega_max * self.limits.dt)) + 5
        for _ in range(max_ticks):
            cmd = follower.step(self.pose)
            if cmd.v == 0.0 and cmd.omega == 0.0:
                break
            if self._tick(cmd):
                break

    def act(self, action: DiscreteAction) -> PoseState:
        """Execute one discrete action as one step. STOP ends the episode without a step."""
        if action.kind is ActionKind.STOP:
            self.stop()
            return self.pose
        if not self._begin_step():
            return self.pose
        p = self.pose
        ahead = (
            p.x + action.magnitude * math.cos(p.heading),
            p.y + action.magnitude * math.sin(p.heading),
        )
        forward = action.kind is ActionKind.FORWARD
        if self.controller is ControllerKind.FLASH:
            if forward:
                self._flash(p.moved(x=ahead[0], y=ahead[1]))
            else:
                self._flash(p.moved(heading=p.heading + action.turn_radians))
        elif self.controller is ControllerKind.PATH and forward:
            self._follow([ahead])
        else:
            self._run(discrete_to_commands(action, self.limits))
        self._end_step(action.name)
        return self.pose

    def move_to(
        self, target: Point, heading: float | None = None, name: str = "waypoint"
    ) -> PoseState:
        """
        Drive to a waypoint as one step.

        The flash controller jumps there (facing the direction of travel unless heading
        is given). The speed controller turns toward the waypoint, then drives straight.
        The path controller runs the PID follower.
        """
        if not self._begin_step():
            return self.pose
        p = self.pose
        dx, dy = target[0] - p.x, target[1] - p.y
        distance = math.hypot(dx, dy)
        bearing = math.atan2(dy, dx) if distance > 0 else p.heading
        if self.controller is ControllerKind.FLASH:
            facing = bearing if heading is None else heading
            self._flash(p.moved(x=target[0], y=target[1], heading=facing))
        elif self.controller is ControllerKind.PATH and distance > 0:
            self._follow([tuple(target)])
        else:
            turn = normalize_angle(bearing - p.heading)
            self._run(rotate_then_translate(turn, distance, self.limits))
        flashed = self.controller is ControllerKind.FLASH
        if heading is not None and not flashed and not self.pose.fallen:
            turn = normalize_angle(heading - self.pose.heading)
            self._run(rotate_then_translate(turn, 0.0, self.limits))
        self._end_step(name)
        return self.pose

    def command(self, commands: list[VelocityCommand], name: str = "velocity") -> PoseState:
        """
        Execute raw velocity commands as one step. Under the flash controller the commands
        are integrated without disturbance and the end pose is flashed to.
        """
        if not self._begin_step():
            return self.pose
        if self.controller is ControllerKind.FLASH:
            target = self.pose
            for cmd in commands:
                cmd = cmd.clipped(self.limits)
                if cmd.duration > 0:
                    target = diff_drive_step(target, cmd, cmd.duration)
            self._flash(target)
        else:
            self._run(commands)
        self._end_step(name)
        return self.pose

    def stop(self, reason: str | None = None) -> None:
        """End the episode with a Stop event at the current step."""
        if self.done:
            return
        self._event(EventKind.STOP, self.steps, reason or "")
        if reason:
            self.trace.failure_reason = reason
