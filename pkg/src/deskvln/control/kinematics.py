"""
Controllers that move a pose: flash (teleport), unicycle integration, and the
speed controller with tracking error, collision resolution and disturbance.
"""
import math

from deskvln.control.commands import ControlLimits, VelocityCommand
from deskvln.embodiment.disturbance import apply_disturbance
from deskvln.embodiment.pose import PoseState
from deskvln.embodiment.profile import RobotProfile
from deskvln.errors import AlreadyFallen, OutOfBounds, TargetInObstacle
from deskvln.utils.seeding import as_generator
from deskvln.utils.typehints import Seconds, Seed
from deskvln.world.gridmap import CellKind, GridMap


def flash_step(pose: PoseState, target: PoseState, grid: GridMap | None = None) -> PoseState:
    """
    Teleport to target, ignoring everything between the two poses.

    Raises:
        TargetInObstacle: target lies in an Obstacle cell or off the map
    """
    if grid is not None:
        where = f"({target.x:.2f}, {target.y:.2f})"
        try:
            kind = grid.kind_at(target.x, target.y)
        except OutOfBounds:
            raise TargetInObstacle(f"flash target {where} is off the map") from None
        if kind is CellKind.OBSTACLE:
            raise TargetInObstacle(f"flash target {where} is inside an obstacle")
    return pose.moved(x=target.x, y=target.y, heading=target.heading)


def diff_drive_step(pose: PoseState, cmd: VelocityCommand, dt: Seconds) -> PoseState:
    """Exact unicycle integration of (v, omega) over dt."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    theta = pose.heading
    if cmd.omega == 0:
        dx = cmd.v * dt * math.cos(theta)
        dy = cmd.v * dt * math.sin(theta)
    else:
        radius = cmd.v / cmd.omega
        theta2 = theta + cmd.omega * dt
        dx = radius * (math.sin(theta2) - math.sin(theta))
        dy = -radius * (math.cos(theta2) - math.cos(theta))
    return pose.moved(x=pose.x + dx, y=pose.y + dy, heading=theta + cmd.omega * dt)


def _blocked(grid: GridMap, before: PoseState, after: PoseState, radius: float) -> bool:
    try:
        if grid.kind_at(after.x, after.y) is CellKind.OBSTACLE:
            return True
    except OutOfBounds:
        return True
    if radius <= 0:
        return False
    limit = radius + grid.cell_size
    clearance = grid.clearance(after.x, after.y, limit)
    return clearance < radius and clearance < grid.clearance(before.x, before.y, limit)


def speed_step(
    pose: PoseState,
    cmd: VelocityCommand,
    profile: RobotProfile,
    grid: GridMap,
    rng_seed: Seed = None,
    limits: ControlLimits = ControlLimits(),
) -> tuple[PoseState, bool, bool]:
    """
    One control tick of the move-by-speed controller.

    The commanded speed is scaled by (1 + U(-e, e)) with e the profile's tracking error,
    integrated in sub-steps of at most a quarter cell, and resolved against obstacles:
    a sub-step that would put the center in an Obstacle, or push the footprint into one,
    keeps its rotation and drops its translation. The tick ends with one disturbance
    update.

    Returns:
        (new pose, collided, on_hole)

    Raises:
        AlreadyFallen: pose.fallen is set
    """
    if pose.fallen:
        raise AlreadyFallen("cannot move a fallen robot")
    rng = as_generator(rng_seed)
    cmd = cmd.clipped(limits)
    e = profile.speed_tracking_error
    v_eff = cmd.v * (1.0 + rng.uniform(-e, e))

    travel = abs(v_eff) * cmd.duration
    substeps = max(1, math.ceil(travel / (grid.cell_size / 4)))
    dt = cmd.duration / substeps
    sub_cmd = VelocityCommand(v_eff, cmd.omega, dt)
    collided = False
    current = pose
    for _ in range(substeps):
        moved = diff_drive_step(current, sub_cmd, dt)
        if _blocked(grid, current, moved, profile.footprint_radius):
            collided = True
            moved = current.moved(heading=current.heading + cmd.omega * dt)
        current = moved

    on_hole = grid.kind_at(current.x, current.y) is CellKind.HOLE
    current = apply_disturbance(current, profile, cmd.v, collided, on_hole, rng)
    return current, collided, on_hole


def legged_speed_step(
    pose: PoseState,
    cmd: VelocityCommand,
    profile: RobotProfile,
    grid: GridMap,
    rng_seed: Seed = None,
    limits: ControlLimits = ControlLimits(),
) -> tuple[PoseState, bool, bool]:
    """speed_step restricted to humanoid and quadruped profiles."""
    if not profile.is_legged:
        raise ValueError(f"legged_speed_step needs a legged profile, got {profile.kind.value}")
    return speed_step(pose, cmd, profile, grid, rng_seed, limits)
