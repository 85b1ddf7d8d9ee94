"""
deskvln - Desk-scale embodied vision-and-language navigation.

Grid worlds with semantic labels, robot embodiments with disturbance and fall models,
motion controllers, and navigation policies (sequence-to-sequence, cross-modal
attention, a diffusion action-chunk policy and a semantic-map agent), plus the
episode generator, runner and metrics that benchmark them.
"""

__version__ = "0.1.0"

from deskvln.world import GridMap, LightingKind, load_map, load_map_file, observe
from deskvln.embodiment import PoseState, ProfileKind, RobotProfile, default_profile
from deskvln.control import ControllerKind, DiscreteAction, Rollout
from deskvln.policy import POLICY_NAMES, make_policy
from deskvln.bench import (
    Episode,
    EpisodeTrace,
    EvalSettings,
    compute_metrics,
    evaluate,
    run_episode,
    sample_episodes,
)
