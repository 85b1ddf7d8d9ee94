"""
Controllers (flash, move-by-speed, move-along-path), discrete action expansion and
episode rollouts.
"""

from deskvln.control.commands import (
    FORWARD,
    FORWARD_STEP,
    STOP,
    TURN_ANGLE_DEG,
    TURN_LEFT,
    TURN_RIGHT,
    ActionKind,
    ControlLimits,
    ControllerKind,
    DiscreteAction,
    VelocityCommand,
)
from deskvln.control.discrete import discrete_to_commands, rotate_then_translate
from deskvln.control.kinematics import diff_drive_step, flash_step, legged_speed_step, speed_step
from deskvln.control.pid import CAPTURE_RADIUS, PidFollower, PidGains, pid_follow_step
from deskvln.control.rollout import (
    TERMINAL_EVENTS,
    EpisodeTrace,
    EventKind,
    Rollout,
    TraceEvent,
)
