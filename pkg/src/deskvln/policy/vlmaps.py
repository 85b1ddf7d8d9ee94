"""
Map-based agent: runs the episode's subgoal program through the semantic-map executor.
"""
import dataclasses
import logging

from deskvln.policy.base import Policy
from deskvln.semnav.affinity import AffinityTable
from deskvln.semnav.executor import NavigatorConfig, ProgramExecutor
from deskvln.semnav.program import Stop, SubgoalProgram

logger = logging.getLogger(__name__)


class VlmapsPolicy(Policy):
    """
    Drives the rollout with ProgramExecutor instead of stepping action by action.

    Episodes without a subgoal program get a bare Stop.
    """

    name = "vlmaps"

    def __init__(
        self, config: NavigatorConfig = NavigatorConfig(), table: AffinityTable | None = None
    ):
        self.config = config
        self.table = table
        self.program = SubgoalProgram((Stop(),))

    def reset(self, episode, grid, rng_seed=None):
        if episode.subgoals is None:
            logger.warning("episode %s has no subgoal program, stopping", episode.episode_id)
            self.program = SubgoalProgram((Stop(),))
        else:
            self.program = episode.subgoals

    def act(self, obs, pose):
        raise NotImplementedError("VlmapsPolicy drives the rollout through run()")

    def run(self, rollout, sensor):
        config = dataclasses.replace(self.config, observation=sensor.config)
        executor = ProgramExecutor(rollout, sensor.lighting, sensor.rng, config, self.table)
        executor.run(self.program)
