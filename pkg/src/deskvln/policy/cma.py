"""
Cross-modal attention baseline.

A first GRU tracks [visual, depth, previous action]. Its state queries the
instruction, visual and depth tokens through scaled dot-product attention; a second
GRU fuses the attended features with the previous action and the first state, and
the action head reads the second state.
"""
from dataclasses import dataclass

import numpy as np

from deskvln.control.commands import DiscreteAction
from deskvln.errors import DimensionMismatch
from deskvln.policy.base import Policy
from deskvln.policy.features import FeatureBundle, FeatureConfig, Featurizer
from deskvln.policy.nets import (
    ActionHead,
    GruWeights,
    gru_step,
    scaled_dot_attention,
    select_action,
)
from deskvln.utils.seeding import derive_seed

HIDDEN_DIM = 64


@dataclass(frozen=True, eq=False)
class CmaWeights:
    """
    Attributes:
        gru1: First GRU, input [V, D, a_prev]
        gru2: Second GRU, input [I_hat, V_hat, D_hat, a_prev, h1]
        q_instruction: Projects h1 to an instruction query
        q_visual: Projects h1 to a visual-token query
        q_depth: Projects h1 to a depth-token query
        head: Action head over h2
        seed: Initialization seed
    """

    KIND = "cma"

    gru1: GruWeights
    gru2: GruWeights
    q_instruction: np.ndarray
    q_visual: np.ndarray
    q_depth: np.ndarray
    head: ActionHead
    seed: int | None = None

    def __post_init__(self):
        hidden = self.gru1.hidden_dim
        for name in ("q_instruction", "q_visual", "q_depth"):
            proj = getattr(self, name)
            if proj.ndim != 2 or proj.shape[1] != hidden:
                raise DimensionMismatch(f"{name} has shape {proj.shape}, hidden size {hidden}")
        if self.gru2.hidden_dim != self.head.w.shape[1]:
            raise DimensionMismatch("action head does not match the second GRU")

    @classmethod
    def init(
        cls, seed: int, features: FeatureConfig = FeatureConfig(), hidden_dim: int = HIDDEN_DIM
    ) -> "CmaWeights":
        rng = np.random.default_rng(derive_seed(seed, cls.KIND))
        f = features
        gru1_in = f.visual_dim + f.depth_dim + f.action_dim
        gru2_in = f.token_dim + f.semantic_bins + f.depth_bins + f.action_dim + hidden_dim
        scale = 1.0 / np.sqrt(hidden_dim)
        return cls(
            gru1=GruWeights.init(rng, gru1_in, hidden_dim),
            gru2=GruWeights.init(rng, gru2_in, hidden_dim),
            q_instruction=rng.normal(0.0, scale, (f.token_dim, hidden_dim)),
            q_visual=rng.normal(0.0, scale, (f.semantic_bins, hidden_dim)),
            q_depth=rng.normal(0.0, scale, (f.depth_bins, hidden_dim)),
            head=ActionHead.init(rng, hidden_dim),
            seed=seed,
        )


def cma_forward(
    features: FeatureBundle,
    state: tuple[np.ndarray, np.ndarray],
    weights: CmaWeights,
) -> tuple[np.ndarray, tuple[np.ndarray, np.ndarray]]:
    """Action probabilities and the next (h1, h2)."""
    h1, h2 = state
    a_prev = features.prev_action
    h1_next = gru_step(np.concatenate([features.v, features.d, a_prev]), h1, weights.gru1)
    i_hat = scaled_dot_attention(
        weights.q_instruction @ h1_next, features.instruction, features.instruction
    )
    v_hat = scaled_dot_attention(weights.q_visual @ h1_next, features.visual, features.visual)
    d_hat = scaled_dot_attention(weights.q_depth @ h1_next, features.depth, features.depth)
    x2 = np.concatenate([i_hat, v_hat, d_hat, a_prev, h1_next])
    h2_next = gru_step(x2, h2, weights.gru2)
    return weights.head.probabilities(h2_next), (h1_next, h2_next)


def cma_step(
    features: FeatureBundle,
    state: tuple[np.ndarray, np.ndarray],
    weights: CmaWeights,
) -> tuple[DiscreteAction, tuple[np.ndarray, np.ndarray]]:
    """
    Raises:
        DimensionMismatch: features or state do not fit the weights
    """
    probs, state = cma_forward(features, state, weights)
    return DiscreteAction(select_action(probs)), state


class CmaPolicy(Policy):
    name = "cma"

    def __init__(
        self,
        weights: CmaWeights | None = None,
        featurizer: Featurizer | None = None,
        seed: int = 0,
    ):
        self.featurizer = featurizer or Featurizer()
        self.weights = weights or CmaWeights.init(seed, self.featurizer.config)
        self.state = self.initial_state()
        self.instruction = self.featurizer.instruction_tokens("")
        self.prev_action: DiscreteAction | None = None

    def initial_state(self) -> tuple[np.ndarray, np.ndarray]:
        return np.zeros(self.weights.gru1.hidden_dim), np.zeros(self.weights.gru2.hidden_dim)

    def reset(self, episode, grid, rng_seed=None):
        self.state = self.initial_state()
        self.instruction = self.featurizer.instruction_tokens(episode.instruction_text)
        self.prev_action = None

    def act(self, obs, pose):
        features = self.featurizer.features(obs, self.instruction, self.prev_action)
        action, self.state = cma_step(features, self.state, self.weights)
        self.prev_action = action
        return action
