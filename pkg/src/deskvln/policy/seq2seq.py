"""
Sequence-to-sequence baseline: one GRU over [visual, depth, instruction] features and
a softmax action head.
"""
from dataclasses import dataclass

import numpy as np

from deskvln.control.commands import DiscreteAction
from deskvln.policy.base import Policy
from deskvln.policy.features import FeatureBundle, FeatureConfig, Featurizer
from deskvln.policy.nets import ActionHead, GruWeights, gru_step, select_action
from deskvln.utils.seeding import derive_seed

HIDDEN_DIM = 64


@dataclass(frozen=True, eq=False)
class Seq2SeqWeights:
    KIND = "seq2seq"

    gru: GruWeights
    head: ActionHead
    seed: int | None = None

    @property
    def hidden_dim(self) -> int:
        return self.gru.hidden_dim

    @classmethod
    def init(
        cls, seed: int, features: FeatureConfig = FeatureConfig(), hidden_dim: int = HIDDEN_DIM
    ) -> "Seq2SeqWeights":
        rng = np.random.default_rng(derive_seed(seed, cls.KIND))
        input_dim = features.visual_dim + features.depth_dim + features.token_dim
        return cls(
            GruWeights.init(rng, input_dim, hidden_dim),
            ActionHead.init(rng, hidden_dim),
            seed,
        )


def seq2seq_forward(
    features: FeatureBundle, h: np.ndarray, weights: Seq2SeqWeights
) -> tuple[np.ndarray, np.ndarray]:
    """Action probabilities and the next hidden state."""
    x = np.concatenate([features.v, features.d, features.instruction_mean])
    h_next = gru_step(x, h, weights.gru)
    return weights.head.probabilities(h_next), h_next


def seq2seq_step(
    features: FeatureBundle, h: np.ndarray, weights: Seq2SeqWeights
) -> tuple[DiscreteAction, np.ndarray]:
    """
    Raises:
        DimensionMismatch: features or h do not fit the weights
    """
    probs, h_next = seq2seq_forward(features, h, weights)
    return DiscreteAction(select_action(probs)), h_next


class Seq2SeqPolicy(Policy):
    name = "seq2seq"

    def __init__(
        self,
        weights: Seq2SeqWeights | None = None,
        featurizer: Featurizer | None = None,
        seed: int = 0,
    ):
        self.featurizer = featurizer or Featurizer()
        self.weights = weights or Seq2SeqWeights.init(seed, self.featurizer.config)
        self.h = np.zeros(self.weights.hidden_dim)
        self.instruction = self.featurizer.instruction_tokens("")
        self.prev_action: DiscreteAction | None = None

    def reset(self, episode, grid, rng_seed=None):
        self.h = np.zeros(self.weights.hidden_dim)
        self.instruction = self.featurizer.instruction_tokens(episode.instruction_text)
        self.prev_action = None

    def act(self, obs, pose):
        features = self.featurizer.features(obs, self.instruction, self.prev_action)
        action, self.h = seq2seq_step(features, self.h, self.weights)
        self.prev_action = action
        return action
