import math
from dataclasses import replace

import numpy as np
import pytest

from deskvln.control import (
    FORWARD,
    STOP,
    TURN_LEFT,
    TURN_RIGHT,
    ActionKind,
    ControlLimits,
    ControllerKind,
    DiscreteAction,
    EpisodeTrace,
    EventKind,
    PidFollower,
    Rollout,
    VelocityCommand,
    diff_drive_step,
    discrete_to_commands,
    flash_step,
    legged_speed_step,
    pid_follow_step,
    speed_step,
)
from deskvln.embodiment import (
    PoseState,
    ProfileKind,
    RobotProfile,
    default_profile,
    normalize_angle,
)
from deskvln.errors import (
    AlreadyFallen,
    EmptyPath,
    SchemaMismatch,
    StopIsTerminal,
    TargetInObstacle,
    ValidationError,
)
from deskvln.world import CellKind

# a wheeled robot with a footprint but no noise, tracking error or impulses
STEADY = RobotProfile(ProfileKind.WHEELED, 0.3, footprint_radius=0.15)


def test_discrete_actions_integrate_to_their_magnitude():
    limits = ControlLimits()
    forward = discrete_to_commands(FORWARD, limits)
    assert [c.duration for c in forward] == pytest.approx([0.1, 0.1, 0.05])
    assert math.fsum(c.v * c.duration for c in forward) == pytest.approx(0.25)
    left = discrete_to_commands(TURN_LEFT, limits)
    assert math.fsum(c.omega * c.duration for c in left) == pytest.approx(math.radians(15))
    right = discrete_to_commands(DiscreteAction(ActionKind.TURN_RIGHT, 90), limits)
    assert math.fsum(c.omega * c.duration for c in right) == pytest.approx(-math.pi / 2)
    assert all(abs(c.v) <= limits.v_max and abs(c.omega) <= limits.omega_max for c in left)


def test_stop_has_no_velocity_expansion():
    with pytest.raises(StopIsTerminal):
        discrete_to_commands(STOP)


def test_discrete_action_validation():
    assert FORWARD.magnitude == 0.25
    assert TURN_RIGHT.turn_radians == pytest.approx(-math.radians(15))
    with pytest.raises(ValidationError):
        DiscreteAction(ActionKind.FORWARD, 0.0)
    with pytest.raises(ValidationError):
        DiscreteAction(ActionKind.TURN_LEFT, 200.0)


def test_diff_drive_straight_and_arc():
    straight = diff_drive_step(PoseState(0, 0, 0), VelocityCommand(1.0, 0.0, 0.5), 0.5)
    assert (straight.x, straight.y) == pytest.approx((0.5, 0.0))
    arc = diff_drive_step(PoseState(0, 0, 0), VelocityCommand(1.0, math.pi / 2, 1.0), 1.0)
    r = 2 / math.pi
    assert (arc.x, arc.y, arc.heading) == pytest.approx((r, r, math.pi / 2))


def test_flash_step_rejects_obstacles(room):
    pose = PoseState(1.5, 1.5)
    assert flash_step(pose, PoseState(8.5, 5.5, 1.0), room).position == (8.5, 5.5)
    with pytest.raises(TargetInObstacle):
        flash_step(pose, PoseState(0.5, 0.5), room)
    with pytest.raises(TargetInObstacle):
        flash_step(pose, PoseState(20.0, 1.5), room)


def test_speed_step_resolves_collisions(room):
    pose = PoseState(1.5, 1.5, math.pi)
    for _ in range(10):
        pose, collided, _ = speed_step(pose, VelocityCommand(1.0, 0.0, 0.1), STEADY, room, 0)
        assert room.kind_at(pose.x, pose.y) is not CellKind.OBSTACLE
    assert collided
    assert pose.x >= 1.0 + STEADY.footprint_radius - 1e-9


def test_speed_step_clips_to_limits(room):
    limits = ControlLimits(v_max=0.5)
    pose, _, _ = speed_step(
        PoseState(1.5, 1.5), VelocityCommand(3.0, 0.0, 1.0), STEADY, room, 0, limits
    )
    assert pose.x == pytest.approx(2.0)


def test_speed_step_refuses_fallen_robot(room):
    with pytest.raises(AlreadyFallen):
        speed_step(PoseState(1.5, 1.5, fallen=True), VelocityCommand(1, 0, 0.1), STEADY, room)


def test_legged_speed_step_needs_legs(room):
    cmd = VelocityCommand(0.5, 0.0, 0.1)
    pose, _, _ = legged_speed_step(PoseState(1.5, 1.5), cmd, default_profile("quadruped"), room, 1)
    assert pose.x > 1.5
    with pytest.raises(ValueError):
        legged_speed_step(PoseState(1.5, 1.5), cmd, STEADY, room)


def test_pid_turns_toward_the_waypoint():
    cmd, index = pid_follow_step(PoseState(0, 0, 0), [(1.0, 1.0)])
    assert index == 0
    assert cmd.omega > 0
    assert 0 < cmd.v <= 1.0
    cmd, _ = pid_follow_step(PoseState(0, 0, 0), [(1.0, -1.0)])
    assert cmd.omega < 0


def test_pid_captures_waypoints_and_stops_at_goal():
    follower = PidFollower([(1.0, 0.0), (2.0, 0.0)])
    follower.step(PoseState(0.9, 0.0))
    assert follower.index == 1
    cmd = follower.step(PoseState(1.95, 0.0))
    assert (cmd.v, cmd.omega) == (0.0, 0.0)
    assert follower.reached(PoseState(1.95, 0.0))
    with pytest.raises(EmptyPath):
        PidFollower([])


def test_flash_rollout_actions(room):
    rollout = Rollout(room, PoseState(1.5, 1.5, 0.0), default_profile("flash"))
    rollout.act(FORWARD)
    assert rollout.pose.position == pytest.approx((1.75, 1.5))
    rollout.act(TURN_LEFT)
    assert rollout.pose.heading == pytest.approx(math.radians(15))
    assert rollout.steps == 2
    assert rollout.trace.actions == ["forward", "turn_left"]


def test_flash_into_a_wall_keeps_the_pose(room):
    rollout = Rollout(room, PoseState(1.5, 1.5, math.pi), default_profile("flash"))
    for _ in range(4):
        rollout.act(FORWARD)
    assert rollout.pose.x == pytest.approx(1.0)
    assert rollout.steps == 4


def test_flash_never_falls_or_gets_stuck(room):
    # the flash controller ignores the profile's disturbance entirely
    humanoid = default_profile("humanoid")
    rollout = Rollout(room, PoseState(4.5, 3.5, math.pi / 2), humanoid, max_steps=100)
    while not rollout.done:
        rollout.act(FORWARD)
    assert not rollout.trace.has(EventKind.FALL)
    assert not rollout.trace.has(EventKind.STUCK)
    assert rollout.trace.terminal.kind is EventKind.TIMEOUT


def test_stop_is_not_a_step(room):
    rollout = Rollout(room, PoseState(1.5, 1.5), default_profile("flash"))
    rollout.act(STOP)
    assert rollout.steps == 0
    assert rollout.done
    assert rollout.trace.terminal.kind is EventKind.STOP
    rollout.act(FORWARD)
    assert rollout.steps == 0


def test_timeout_after_max_steps(room):
    rollout = Rollout(room, PoseState(1.5, 1.5), default_profile("flash"), max_steps=2)
    rollout.act(TURN_LEFT)
    assert not rollout.done
    rollout.act(TURN_LEFT)
    assert rollout.trace.terminal == rollout.trace.events[-1]
    assert rollout.trace.terminal.kind is EventKind.TIMEOUT
    assert rollout.trace.terminal.step == 2


def test_pushing_into_a_wall_gets_stuck(room):
    rollout = Rollout(
        room, PoseState(1.5, 1.5, math.pi), STEADY, ControllerKind.SPEED, rng_seed=0
    )
    while not rollout.done:
        rollout.act(FORWARD)
    assert rollout.trace.terminal.kind is EventKind.STUCK
    assert rollout.trace.terminal.step == 50
    assert rollout.trace.has(EventKind.COLLISION)


def test_hole_impulse_topples_the_robot(room):
    wobbly = RobotProfile(ProfileKind.HUMANOID, 1.8, hole_impulse=1.0)
    rollout = Rollout(room, PoseState(4.5, 3.5, math.pi / 2), wobbly, ControllerKind.SPEED, 0)
    while not rollout.done:
        rollout.act(FORWARD)
    assert rollout.trace.terminal.kind is EventKind.FALL
    assert rollout.pose.fallen
    with pytest.raises(AlreadyFallen):
        rollout.act(FORWARD)


@pytest.mark.parametrize("controller", list(ControllerKind))
def test_move_to_reaches_the_waypoint(room, controller):
    rollout = Rollout(room, PoseState(1.5, 1.5, 0.0), STEADY, controller, rng_seed=0)
    rollout.move_to((3.5, 3.5), heading=0.0)
    assert rollout.pose.position == pytest.approx((3.5, 3.5), abs=0.06)
    assert rollout.pose.heading == pytest.approx(0.0, abs=1e-6)
    assert rollout.steps == 1
    assert rollout.trace.actions == ["waypoint"]


def test_velocity_commands_under_flash_skip_disturbance(room):
    rollout = Rollout(room, PoseState(1.5, 1.5, 0.0), default_profile("humanoid"))
    rollout.command([VelocityCommand(1.0, 0.0, 0.5), VelocityCommand(1.0, 0.0, 0.5)])
    assert rollout.pose.position == pytest.approx((2.5, 1.5))
    assert (rollout.pose.roll, rollout.pose.pitch) == (0.0, 0.0)


def test_trace_serialization(room):
    rollout = Rollout(room, PoseState(1.5, 1.5), default_profile("flash"), episode_id="e1")
    rollout.act(FORWARD)
    rollout.act(FORWARD)
    rollout.stop("done")
    trace = rollout.trace
    assert trace.path_length() == pytest.approx(0.5)
    again = EpisodeTrace.from_dict(trace.to_dict())
    assert again.poses == trace.poses
    assert again.events == trace.events
    assert again.failure_reason == "done"
    data = trace.to_dict()
    data["schema_version"] = 99
    with pytest.raises(SchemaMismatch):
        EpisodeTrace.from_dict(data)


def test_diff_drive_reverses_exactly():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        pose = PoseState(*rng.uniform(-5, 5, size=2), rng.uniform(-math.pi, math.pi))
        v, omega = rng.uniform(-1, 1), rng.choice([0.0, rng.uniform(-2, 2)])
        dt = rng.uniform(0.01, 1.0)
        there = diff_drive_step(pose, VelocityCommand(v, omega, dt), dt)
        back = diff_drive_step(there, VelocityCommand(-v, -omega, dt), dt)
        assert back.x == pytest.approx(pose.x, abs=1e-9)
        assert back.y == pytest.approx(pose.y, abs=1e-9)
        assert abs(normalize_angle(back.heading - pose.heading)) < 1e-9


def test_humanoid_topples_after_repeated_wall_pushes(room):
    # footprint touching the west wall, so every tick of every forward step collides
    humanoid = replace(default_profile("humanoid"), disturbance_sigma=0.0)
    rollout = Rollout(room, PoseState(1.25, 1.5, math.pi), humanoid, ControllerKind.SPEED, 0)
    for _ in range(3):
        rollout.act(FORWARD)
    assert not rollout.pose.fallen
    assert 0 < rollout.pose.roll < math.radians(15)
    rollout.act(FORWARD)
    assert rollout.pose.fallen
    assert rollout.trace.terminal.kind is EventKind.FALL
    assert rollout.trace.terminal.step == 4
