"""
Robot embodiments: profiles, pose state, attitude disturbance, fall and stuck detection.
"""

from deskvln.embodiment.pose import PoseState, normalize_angle
from deskvln.embodiment.profile import (
    DEFAULT_PROFILES,
    ProfileKind,
    RobotProfile,
    default_profile,
    profile_from_config,
    profile_to_config,
)
from deskvln.embodiment.disturbance import AR_COEFFICIENT, apply_disturbance
from deskvln.embodiment.detectors import (
    STUCK_WINDOW,
    StuckWindow,
    check_fall,
    check_stuck,
    heading_span,
    max_displacement,
)
