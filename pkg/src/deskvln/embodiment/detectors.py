"""
Fall and stuck detection.

A robot has fallen when |roll| > 15 deg or |pitch| > 35 deg (profile thresholds). It is
stuck when, over the last 50 steps, it neither moved 0.2 m nor turned 15 deg.
"""
import math
from collections import deque

import numpy as np

from deskvln.embodiment.pose import PoseState
from deskvln.embodiment.profile import RobotProfile

STUCK_WINDOW = 50
STUCK_DISPLACEMENT = 0.2
STUCK_HEADING_DEG = 15.0


def check_fall(pose: PoseState, profile: RobotProfile) -> bool:
    return abs(pose.roll) > math.radians(profile.fall_roll_deg) or abs(pose.pitch) > math.radians(
        profile.fall_pitch_deg
    )


class StuckWindow:
    """Ring buffer of the last `size` poses as (x, y, heading)."""

    def __init__(self, size: int = STUCK_WINDOW):
        if size < 1:
            raise ValueError("stuck window size must be >= 1")
        self.size = size
        self.poses: deque[tuple[float, float, float]] = deque(maxlen=size)

    def __len__(self):
        return len(self.poses)

    @property
    def is_full(self) -> bool:
        return len(self.poses) == self.size

    def push(self, pose: PoseState) -> None:
        self.poses.append((pose.x, pose.y, pose.heading))

    def clear(self) -> None:
        self.poses.clear()


def heading_span(headings) -> float:
    """
    Width of the smallest arc containing every heading, in radians.
    """
    h = np.sort(np.asarray(headings, dtype=float))
    if h.size < 2:
        return 0.0
    gaps = np.diff(h)
    wrap_gap = h[0] + math.tau - h[-1]
    if wrap_gap >= gaps.max():
        return float(h[-1] - h[0])
    return float(math.tau - gaps.max())


def max_displacement(points) -> float:
    """Largest pairwise distance between points given as an (n, 2) array."""
    p = np.asarray(points, dtype=float)
    if len(p) < 2:
        return 0.0
    d = np.hypot(p[:, None, 0] - p[None, :, 0], p[:, None, 1] - p[None, :, 1])
    return float(d.max())


def check_stuck(
    window: StuckWindow,
    displacement: float = STUCK_DISPLACEMENT,
    heading_deg: float = STUCK_HEADING_DEG,
) -> bool:
    if not window.is_full:
        return False
    poses = np.array(window.poses)
    still = max_displacement(poses[:, :2]) < displacement
    return still and heading_span(poses[:, 2]) < math.radians(heading_deg)
