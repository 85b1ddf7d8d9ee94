"""
The policy interface.

A policy is reset once per episode and then asked for one discrete action per step.
Policies that drive the rollout themselves (waypoint or program executors) override
run().
"""
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from deskvln.control.commands import DiscreteAction
from deskvln.control.rollout import Rollout
from deskvln.embodiment.pose import PoseState
from deskvln.embodiment.profile import RobotProfile
from deskvln.utils.typehints import Seed
from deskvln.world.gridmap import GridMap
from deskvln.world.lighting import LightingCondition
from deskvln.world.observe import Observation, ObservationConfig, observe

if TYPE_CHECKING:
    from deskvln.bench.episode import Episode


@dataclass
class Sensor:
    """Renders observations for one episode, drawing noise from its own generator."""

    grid: GridMap
    profile: RobotProfile
    lighting: LightingCondition
    rng: np.random.Generator
    config: ObservationConfig = ObservationConfig()

    def __call__(self, pose: PoseState) -> Observation:
        return observe(self.grid, pose, self.profile, self.lighting, self.rng, self.config)


class Policy:
    """Base class for agents."""

    name = "policy"
    needs_observation = True

    def reset(self, episode: "Episode", grid: GridMap, rng_seed: Seed = None) -> None:
        """Prepare for a new episode."""

    def act(self, obs: Observation | None, pose: PoseState) -> DiscreteAction:
        raise NotImplementedError

    def run(self, rollout: Rollout, sensor: Sensor) -> None:
        """Drive rollout until it ends: observe, act, repeat."""
        while not rollout.done:
            obs = sensor(rollout.pose) if self.needs_observation else None
            rollout.act(self.act(obs, rollout.pose))
