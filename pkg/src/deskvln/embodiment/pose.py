import math
from dataclasses import dataclass, replace

from deskvln.utils.typehints import Meters, Point, Radians


def normalize_angle(angle: Radians) -> Radians:
    """Wrap an angle into (-pi, pi]."""
    a = math.remainder(angle, math.tau)
    return math.pi if a == -math.pi else a


@dataclass(frozen=True)
class PoseState:
    """
    Planar pose plus attitude.

    Heading is measured from +x toward +y and kept in (-pi, pi]. Once fallen is set it
    stays set for the rest of the episode.
    """

    x: Meters
    y: Meters
    heading: Radians = 0.0
    roll: Radians = 0.0
    pitch: Radians = 0.0
    fallen: bool = False
    step_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "heading", normalize_angle(self.heading))

    @property
    def position(self) -> Point:
        return self.x, self.y

    def moved(self, **changes) -> "PoseState":
        if self.fallen:
            changes["fallen"] = True
        return replace(self, **changes)

    def distance_to(self, point: Point) -> Meters:
        return math.hypot(point[0] - self.x, point[1] - self.y)
