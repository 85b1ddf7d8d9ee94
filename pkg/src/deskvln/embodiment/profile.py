"""
Robot profiles: camera height, footprint and the disturbance magnitudes of each
embodiment.
"""
from dataclasses import dataclass, fields, replace
from enum import Enum

from deskvln.errors import ValidationError
from deskvln.utils.env.coerce import coerce_float


class ProfileKind(str, Enum):
    HUMANOID = "humanoid"
    QUADRUPED = "quadruped"
    WHEELED = "wheeled"
    FLASH = "flash"


DISTURBANCE_FIELDS = (
    "disturbance_sigma",
    "collision_impulse",
    "hole_impulse",
    "speed_tracking_error",
)


@dataclass(frozen=True)
class RobotProfile:
    """
    Attributes:
        kind: Embodiment family
        camera_height: Meters above the floor
        footprint_radius: Collision circle radius in meters
        disturbance_sigma: Scale of the attitude AR(1) noise, radians
        collision_impulse: Attitude kick per collision, radians
        hole_impulse: Attitude kick per control tick spent on a Hole cell, radians
        speed_tracking_error: Relative speed error bound, in [0, 1)
        fall_roll_deg: Roll beyond which the robot has fallen
        fall_pitch_deg: Pitch beyond which the robot has fallen
    """

    kind: ProfileKind
    camera_height: float
    footprint_radius: float = 0.0
    disturbance_sigma: float = 0.0
    collision_impulse: float = 0.0
    hole_impulse: float = 0.0
    speed_tracking_error: float = 0.0
    fall_roll_deg: float = 15.0
    fall_pitch_deg: float = 35.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ProfileKind(self.kind))
        if self.camera_height <= 0:
            raise ValidationError(f"camera height must be positive, got {self.camera_height}")
        if self.footprint_radius < 0:
            raise ValidationError("footprint radius must be >= 0")
        if not 0.0 <= self.speed_tracking_error < 1.0:
            raise ValidationError("speed tracking error must be in [0, 1)")
        for name in DISTURBANCE_FIELDS[:3]:
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0")
        if self.kind is ProfileKind.FLASH and any(getattr(self, f) for f in DISTURBANCE_FIELDS):
            raise ValidationError("the flash profile has no disturbance")

    @property
    def is_legged(self) -> bool:
        return self.kind in (ProfileKind.HUMANOID, ProfileKind.QUADRUPED)


DEFAULT_PROFILES = {
    ProfileKind.HUMANOID: RobotProfile(ProfileKind.HUMANOID, 1.8, 0.25, 0.01, 0.04, 0.3, 0.15),
    ProfileKind.QUADRUPED: RobotProfile(ProfileKind.QUADRUPED, 0.5, 0.2, 0.006, 0.03, 0.2, 0.10),
    ProfileKind.WHEELED: RobotProfile(ProfileKind.WHEELED, 0.3, 0.15, 0.002, 0.01, 0.0, 0.05),
    ProfileKind.FLASH: RobotProfile(ProfileKind.FLASH, 1.2),
}


def default_profile(kind: str | ProfileKind) -> RobotProfile:
    return DEFAULT_PROFILES[ProfileKind(kind)]


def profile_to_config(profile: RobotProfile) -> dict[str, str]:
    """Serialize a profile as a key=value block (values are strings)."""
    block = {f.name: repr(getattr(profile, f.name)) for f in fields(profile) if f.name != "kind"}
    return {"kind": profile.kind.value, **block}


def profile_from_config(config: dict[str, str], base: RobotProfile | None = None) -> RobotProfile:
    """
    Build a profile from a key=value block.

    Missing fields come from base, or from the default profile of config["kind"].
    Keys are matched case-insensitively.

    Raises:
        ValidationError: unknown field, unparsable number, or invalid resulting profile
    """
    config = {k.lower(): v for k, v in config.items()}
    if base is None:
        if "kind" not in config:
            raise ValidationError("profile config needs a 'kind' or a base profile")
        base = default_profile(config["kind"])
    known = {f.name for f in fields(RobotProfile)}
    changes = {}
    for key, value in config.items():
        if key not in known:
            raise ValidationError(f"unknown profile field {key!r}")
        if key == "kind":
            changes[key] = ProfileKind(value.strip().lower())
            continue
        number = coerce_float(value)
        if number is None:
            raise ValidationError(f"profile field {key!r} needs a number, got {value!r}")
        changes[key] = number
    return replace(base, **changes)
