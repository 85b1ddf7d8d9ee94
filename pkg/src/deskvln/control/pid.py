"""
Move-along-path control: a PID loop on the heading error toward the current waypoint.
"""
import math
from dataclasses import dataclass

from deskvln.control.commands import ControlLimits, VelocityCommand
from deskvln.embodiment.pose import PoseState, normalize_angle
from deskvln.errors import EmptyPath, ValidationError
from deskvln.utils.typehints import Meters, Point

CAPTURE_RADIUS = 0.2


@dataclass(frozen=True)
class PidGains:
    kp: float = 2.0
    ki: float = 0.0
    kd: float = 0.1
    ct_kp: float = 0.0  # cross-track gain

    def __post_init__(self):
        if min(self.kp, self.ki, self.kd, self.ct_kp) < 0:
            raise ValidationError("PID gains must be >= 0")


def cross_track_error(a: Point, b: Point, p: Point) -> float:
    """Signed distance of p from the line a->b; positive when p is right of the line."""
    sx, sy = b[0] - a[0], b[1] - a[1]
    length = math.hypot(sx, sy)
    if length == 0.0:
        return 0.0
    return ((p[0] - a[0]) * sy - (p[1] - a[1]) * sx) / length


class PidFollower:
    """
    Stateful waypoint follower.

    The integrator, previous error and waypoint index persist across ticks. The
    waypoint index advances while the robot is within capture_radius of the current
    waypoint. Within goal_tolerance of the last waypoint (default: the capture
    radius) the follower emits a zero command.
    """

    def __init__(
        self,
        path: list[Point],
        gains: PidGains = PidGains(),
        limits: ControlLimits = ControlLimits(),
        capture_radius: Meters = CAPTURE_RADIUS,
        goal_tolerance: Meters | None = None,
    ):
        if not path:
            raise EmptyPath("path follower needs at least one waypoint")
        self.path = [tuple(map(float, p)) for p in path]
        self.gains = gains
        self.limits = limits
        self.capture_radius = capture_radius
        self.goal_tolerance = capture_radius if goal_tolerance is None else goal_tolerance
        self.index = 0
        self.integral = 0.0
        self.prev_error: float | None = None

    def reached(self, pose: PoseState) -> bool:
        """True once the last waypoint is within the capture radius."""
        last = len(self.path) - 1
        return self.index == last and pose.distance_to(self.path[-1]) <= self.goal_tolerance

    def step(self, pose: PoseState) -> VelocityCommand:
        dt = self.limits.dt
        last = len(self.path) - 1
        while self.index < last and pose.distance_to(self.path[self.index]) <= self.capture_radius:
            self.index += 1
        target = self.path[self.index]
        distance = pose.distance_to(target)
        if self.index == last and distance <= self.goal_tolerance:
            self.integral = 0.0
            self.prev_error = None
            return VelocityCommand(0.0, 0.0, dt)

        error = normalize_angle(math.atan2(target[1] - pose.y, target[0] - pose.x) - pose.heading)
        self.integral += error * dt
        derivative = 0.0
        if self.prev_error is not None:
            derivative = normalize_angle(error - self.prev_error) / dt
        self.prev_error = error
        g = self.gains
        omega = g.kp * error + g.ki * self.integral + g.kd * derivative
        if g.ct_kp and self.index > 0:
            omega += g.ct_kp * cross_track_error(self.path[self.index - 1], target, pose.position)
        v = min(self.limits.v_max * max(math.cos(error), 0.0), distance / dt)
        return VelocityCommand(v, omega, dt).clipped(self.limits)


def pid_follow_step(
    pose: PoseState,
    path: list[Point],
    gains: PidGains = PidGains(),
    dt: float | None = None,
    limits: ControlLimits = ControlLimits(),
    capture_radius: Meters = CAPTURE_RADIUS,
) -> tuple[VelocityCommand, int]:
    """
    Functional form of PidFollower.step with a fresh controller state.

    Returns:
        (command, index of the waypoint being tracked)

    Raises:
        EmptyPath: path is empty
    """
    if dt is not None:
        limits = ControlLimits(limits.v_max, limits.omega_max, dt)
    follower = PidFollower(path, gains, limits, capture_radius)
    cmd = follower.step(pose)
    return cmd, follower.index
