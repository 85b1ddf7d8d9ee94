"""
Episode runner and batch evaluation.

Each episode gets its own seed derived from the run seed and the episode id, and from it
separate generators for the rollout (disturbance), the sensor (perception noise) and the
policy, so results do not depend on which worker ran an episode or in what order.
"""
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from tqdm import tqdm

from deskvln.bench.episode import Episode
from deskvln.control.commands import ControlLimits, ControllerKind
from deskvln.control.rollout import EpisodeTrace, Rollout
from deskvln.embodiment.profile import RobotProfile
from deskvln.errors import AlreadyFallen, NoFrontiers, NoPath, ValidationError
from deskvln.policy.base import Policy, Sensor
from deskvln.policy.registry import make_policy
from deskvln.rdp.policy import RdpConfig
from deskvln.semnav.executor import NavigatorConfig
from deskvln.utils.seeding import derive_seed
from deskvln.utils.typehints import Meters
from deskvln.world.gridmap import GridMap
from deskvln.world.lighting import LightingCondition
from deskvln.world.observe import ObservationConfig

logger = logging.getLogger(__name__)

MAX_STEPS = 200


def run_episode(
    episode: Episode,
    grid: GridMap,
    policy: Policy,
    controller: ControllerKind,
    profile: RobotProfile,
    lighting: LightingCondition,
    max_steps: int = MAX_STEPS,
    rng_seed: int = 0,
    observation: ObservationConfig = ObservationConfig(),
    limits: ControlLimits = ControlLimits(),
) -> EpisodeTrace:
    """
    Run one episode: observe, decide, execute, disturb, check for falls and getting
    stuck, until Stop, Fall, Stuck or max_steps.

    Planning failures inside the policy end the episode with a Stop event and a
    failure_reason; nothing is raised.
    """
    if episode.scene_id != grid.scene_id:
        logger.warning(
            "episode %s belongs to scene %s, running on %s",
            episode.episode_id,
            episode.scene_id,
            grid.scene_id,
        )
    rollout = Rollout(
        grid,
        episode.start_pose,
        profile,
        controller,
        np.random.default_rng(derive_seed(rng_seed, "rollout")),
        limits=limits,
        max_steps=max_steps,
        episode_id=episode.episode_id,
    )
    sensor = Sensor(
        grid, profile, lighting, np.random.default_rng(derive_seed(rng_seed, "sensor")), observation
    )
    policy.reset(episode, grid, derive_seed(rng_seed, "policy"))
    try:
        policy.run(rollout, sensor)
    except (NoPath, NoFrontiers) as e:
        logger.info("episode %s: %s", episode.episode_id, e)
        rollout.stop(reason=str(e))
    except AlreadyFallen:
        pass
    if not rollout.done:
        rollout.stop()
    return rollout.trace


@dataclass(frozen=True)
class EvalSettings:
    """Everything a worker needs to rebuild the policy and run episodes."""

    policy: str
    controller: ControllerKind
    profile: RobotProfile
    lighting: LightingCondition
    seed: int
    max_steps: int = MAX_STEPS
    success_radius: Meters = 3.0
    weights: Path | None = None
    observation: ObservationConfig = ObservationConfig()
    limits: ControlLimits = ControlLimits()
    navigator: NavigatorConfig = NavigatorConfig()
    rdp: RdpConfig = RdpConfig()

    def build_policy(self) -> Policy:
        return make_policy(
            self.policy,
            seed=self.seed,
            weights_path=self.weights,
            success_radius=self.success_radius,
            navigator=self.navigator,
            rdp=self.rdp,
        )


@lru_cache(maxsize=4)
def _worker_policy(settings: EvalSettings) -> Policy:
    return settings.build_policy()


def _run_one(job: tuple[EvalSettings, Episode, GridMap]) -> EpisodeTrace:
    settings, episode, grid = job
    return run_episode(
        episode,
        grid,
        _worker_policy(settings),
        settings.controller,
        settings.profile,
        settings.lighting,
        settings.max_steps,
        derive_seed(settings.seed, episode.episode_id),
        settings.observation,
        settings.limits,
    )


def evaluate(
    episodes: Sequence[Episode],
    grids: GridMap | Mapping[str, GridMap],
    settings: EvalSettings,
    workers: int = 1,
    progress: bool = True,
) -> list[EpisodeTrace]:
    """
    Run every episode and return the traces in episode order.

    Args:
        episodes: Episodes to run
        grids: The map, or maps by scene_id
        settings: Policy and simulation settings
        workers: Worker processes; 1 runs in this process
        progress: Show a tqdm bar on stderr

    Raises:
        ValidationError: an episode's scene is not among grids
    """
    jobs = []
    for episode in episodes:
        if isinstance(grids, GridMap):
            grid = grids
        elif episode.scene_id in grids:
            grid = grids[episode.scene_id]
        else:
            raise ValidationError(f"no map for scene {episode.scene_id!r}")
        jobs.append((settings, episode, grid))
    bar = dict(total=len(jobs), file=sys.stderr, disable=not progress, desc=settings.policy)
    if workers <= 1:
        return [_run_one(job) for job in tqdm(jobs, **bar)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(tqdm(pool.map(_run_one, jobs, chunksize=4), **bar))
