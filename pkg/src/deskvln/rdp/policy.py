"""
Chunk execution and the closed-loop recurrent diffusion policy.

Each iteration observes, updates the history state, samples an 8-waypoint chunk and
the stop progress, then either stops or executes the first four waypoints.
"""
import functools
import logging
import math
from dataclasses import dataclass

import numpy as np

from deskvln.control.commands import ControlLimits, ControllerKind
from deskvln.control.rollout import Rollout
from deskvln.embodiment.pose import PoseState
from deskvln.embodiment.profile import RobotProfile
from deskvln.errors import AlreadyFallen, InvalidRange
from deskvln.policy.base import Policy, Sensor
from deskvln.policy.features import Featurizer
from deskvln.rdp.model import (
    ACTION_THRESHOLD,
    PA_STEPS,
    PROGRESS_THRESHOLD,
    RdpWeights,
    build_condition,
    predict_noise,
    predict_stop,
    previous_actions,
    relative_coordinates,
    stop_gate,
    update_history,
)
from deskvln.rdp.schedule import (
    BETA_MAX,
    BETA_MIN,
    DENOISE_STEPS,
    HORIZON,
    make_schedule,
    sample_chunk,
)
from deskvln.utils.seeding import as_generator
from deskvln.utils.typehints import Seed
from deskvln.world.gridmap import GridMap

logger = logging.getLogger(__name__)

EXECUTED_WAYPOINTS = 4


@dataclass(frozen=True)
class RdpConfig:
    denoise_steps: int = DENOISE_STEPS
    beta_min: float = BETA_MIN
    beta_max: float = BETA_MAX
    horizon: int = HORIZON
    executed: int = EXECUTED_WAYPOINTS
    action_threshold: float = ACTION_THRESHOLD
    progress_threshold: float = PROGRESS_THRESHOLD


def run_chunk(chunk: np.ndarray, n_exec: int, rollout: Rollout) -> PoseState:
    """
    Execute the first n_exec waypoints of chunk, one rollout step each, and drop the rest.

    Each row (dx, dy, dyaw) is an offset in the body frame of the pose reached by the
    previous row; dyaw is clipped to [-pi, pi]. The rollout's controller turns toward the
    offset, drives it, then turns by dyaw.

    Raises:
        InvalidRange: n_exec outside [1, len(chunk)]
        AlreadyFallen: the robot has fallen
    """
    chunk = np.asarray(chunk, dtype=float)
    if not 1 <= n_exec <= len(chunk):
        raise InvalidRange(f"cannot execute {n_exec} of {len(chunk)} waypoints")
    if rollout.pose.fallen:
        raise AlreadyFallen("the robot has fallen; the episode is over")
    for dx, dy, dyaw in chunk[:n_exec]:
        if rollout.done:
            break
        p = rollout.pose
        c, s = math.cos(p.heading), math.sin(p.heading)
        target = (p.x + c * dx - s * dy, p.y + s * dx + c * dy)
        heading = p.heading + float(np.clip(dyaw, -math.pi, math.pi))
        rollout.move_to(target, heading=heading, name="waypoint")
    return rollout.pose


def execute_chunk(
    chunk: np.ndarray,
    n_exec: int,
    pose: PoseState,
    controller: ControllerKind,
    profile: RobotProfile,
    grid: GridMap,
    *,
    rng_seed: Seed = None,
    limits: ControlLimits = ControlLimits(),
) -> PoseState:
    """
    Execute the first n_exec waypoints of chunk from pose in a fresh rollout on grid.

    See run_chunk for the waypoint semantics. Fall and stuck checks still apply, so
    fewer than n_exec waypoints run when one of them ends the episode.
    """
    rollout = Rollout(
        grid, pose, profile, controller, rng_seed, limits=limits, max_steps=max(n_exec, 1)
    )
    return run_chunk(chunk, n_exec, rollout)


class RdpPolicy(Policy):
    """Closed-loop chunk sampler; drives the rollout through run()."""

    name = "rdp"

    def __init__(
        self,
        weights: RdpWeights | None = None,
        featurizer: Featurizer | None = None,
        config: RdpConfig = RdpConfig(),
        seed: int = 0,
    ):
        self.featurizer = featurizer or Featurizer()
        self.config = config
        self.weights = weights or RdpWeights.init(
            seed, self.featurizer.config, horizon=config.horizon
        )
        self.schedule = make_schedule(config.denoise_steps, config.beta_min, config.beta_max)
        self.predictor = functools.partial(predict_noise, self.weights)
        self.instruction = self.featurizer.instruction_tokens("")
        self.rng = as_generator(None)

    def reset(self, episode, grid, rng_seed=None):
        self.instruction = self.featurizer.instruction_tokens(episode.instruction_text)
        self.rng = as_generator(rng_seed)

    def act(self, obs, pose):
        raise NotImplementedError("RdpPolicy executes whole chunks through run()")

    def run(self, rollout: Rollout, sensor: Sensor) -> None:
        cfg = self.config
        start = rollout.pose
        h = np.zeros(self.weights.history.hidden_dim)
        while not rollout.done:
            pose = rollout.pose
            features = self.featurizer.features(sensor(pose), self.instruction)
            rc = relative_coordinates(start, pose)
            pa = previous_actions(rollout.trace.poses[-(PA_STEPS + 1) :])
            h = update_history(h, features.v, rc, pa, self.weights.history)
            cond = build_condition(h, features, rc, pa, self.weights)
            chunk = sample_chunk(cond, self.predictor, self.schedule, self.rng, cfg.horizon)
            progress = predict_stop(self.weights, cond)
            if stop_gate(chunk, progress, cfg.action_threshold, cfg.progress_threshold):
                logger.debug("stop gate at step %d (progress %.2f)", rollout.steps, progress)
                rollout.stop()
                break
            run_chunk(chunk, cfg.executed, rollout)
