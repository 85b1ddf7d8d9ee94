"""
Command types shared by the controllers.
"""
import math
from dataclasses import dataclass
from enum import Enum, IntEnum

from deskvln.errors import ValidationError
from deskvln.utils.typehints import Seconds

FORWARD_STEP = 0.25  # meters
TURN_ANGLE_DEG = 15.0


class ActionKind(IntEnum):
    STOP = 0
    FORWARD = 1
    TURN_LEFT = 2
    TURN_RIGHT = 3


class ControllerKind(str, Enum):
    FLASH = "flash"  # teleport to the target
    SPEED = "speed"  # differential drive with disturbance
    PATH = "path"  # PID waypoint following on top of SPEED


@dataclass(frozen=True)
class ControlLimits:
    v_max: float = 1.0
    omega_max: float = math.pi / 2
    dt: Seconds = 0.1

    def __post_init__(self):
        if self.v_max <= 0 or self.omega_max <= 0 or self.dt <= 0:
            raise ValidationError("control limits must be positive")


@dataclass(frozen=True)
class VelocityCommand:
    v: float
    omega: float
    duration: Seconds

    def clipped(self, limits: ControlLimits) -> "VelocityCommand":
        v = min(max(self.v, -limits.v_max), limits.v_max)
        omega = min(max(self.omega, -limits.omega_max), limits.omega_max)
        return VelocityCommand(v, omega, self.duration)


@dataclass(frozen=True)
class DiscreteAction:
    """
    A discrete VLN action. magnitude is meters for FORWARD and degrees for turns;
    None picks the default (0.25 m, 15 deg).
    """

    kind: ActionKind
    magnitude: float | None = None

    def __post_init__(self):
        kind = ActionKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.magnitude is None:
            default = {ActionKind.FORWARD: FORWARD_STEP, ActionKind.STOP: 0.0}
            object.__setattr__(self, "magnitude", default.get(kind, TURN_ANGLE_DEG))
        if kind is ActionKind.FORWARD and not self.magnitude > 0:
            raise ValidationError(f"forward magnitude must be > 0, got {self.magnitude}")
        if kind in (ActionKind.TURN_LEFT, ActionKind.TURN_RIGHT) and not 0 < self.magnitude <= 180:
            raise ValidationError(f"turn magnitude must be in (0, 180] deg, got {self.magnitude}")

    @property
    def name(self) -> str:
        return self.kind.name.lower()

    @property
    def turn_radians(self) -> float:
        """Signed heading change; positive is a left turn."""
        if self.kind is ActionKind.TURN_LEFT:
            return math.radians(self.magnitude)
        if self.kind is ActionKind.TURN_RIGHT:
            return -math.radians(self.magnitude)
        return 0.0


STOP = DiscreteAction(ActionKind.STOP)
FORWARD = DiscreteAction(ActionKind.FORWARD)
TURN_LEFT = DiscreteAction(ActionKind.TURN_LEFT)
TURN_RIGHT = DiscreteAction(ActionKind.TURN_RIGHT)
