"""
Deterministic featurizers standing in for pretrained encoders.

Visual tokens bin the detected semantic labels of each bearing sector, depth tokens
are per-sector depth histograms, and instruction tokens are seeded Gaussian word
vectors weighted by word rarity.
"""
import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from wordfreq import tokenize, zipf_frequency

from deskvln.control.commands import ActionKind, DiscreteAction
from deskvln.utils.seeding import derive_seed
from deskvln.world.observe import Observation

EMPTY_TOKEN = "<empty>"
START_ACTION = len(ActionKind)


@dataclass(frozen=True)
class FeatureConfig:
    sectors: int = 4
    semantic_bins: int = 8
    depth_bins: int = 8
    token_dim: int = 32
    action_dim: int = 32
    lang: str = "en"
    seed: int = 0

    @property
    def visual_dim(self) -> int:
        return self.sectors * self.semantic_bins

    @property
    def depth_dim(self) -> int:
        return self.sectors * self.depth_bins


@dataclass(frozen=True, eq=False)
class FeatureBundle:
    """
    Attributes:
        visual: (sectors, semantic_bins) tokens
        depth: (sectors, depth_bins) tokens
        instruction: (n_tokens, token_dim) word features
        prev_action: (action_dim,) embedding of the previous action
    """

    visual: np.ndarray
    depth: np.ndarray
    instruction: np.ndarray
    prev_action: np.ndarray

    @property
    def v(self) -> np.ndarray:
        return self.visual.reshape(-1)

    @property
    def d(self) -> np.ndarray:
        return self.depth.reshape(-1)

    @property
    def instruction_mean(self) -> np.ndarray:
        return self.instruction.mean(axis=0)


def _stable_hash(text: str) -> int:
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "little")


@lru_cache(maxsize=4096)
def _token_vector(token: str, dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(derive_seed(seed, "token", token))
    vector = rng.normal(size=dim) / np.sqrt(dim)
    vector.setflags(write=False)
    return vector


def sector_of(bearing: float, fov: float, sectors: int) -> int:
    """Sector index of a bearing in [-fov/2, fov/2]; sector 0 is the rightmost."""
    if fov <= 0:
        return 0
    frac = (bearing + fov / 2) / fov
    return min(max(int(frac * sectors), 0), sectors - 1)


class Featurizer:
    """Turns observations, instructions and previous actions into a FeatureBundle."""

    def __init__(self, config: FeatureConfig = FeatureConfig()):
        self.config = config
        rng = np.random.default_rng(derive_seed(config.seed, "actions"))
        self.action_table = rng.normal(size=(START_ACTION + 1, config.action_dim))
        self.action_table /= np.sqrt(config.action_dim)
        self.action_table.setflags(write=False)

    def visual_tokens(self, obs: Observation) -> np.ndarray:
        cfg = self.config
        tokens = np.zeros((cfg.sectors, cfg.semantic_bins))
        for label in obs.visible_labels:
            s = sector_of(label.bearing, obs.fov, cfg.sectors)
            b = _stable_hash(label.name) % cfg.semantic_bins
            tokens[s, b] = max(tokens[s, b], label.score)
        return tokens

    def depth_tokens(self, obs: Observation) -> np.ndarray:
        cfg = self.config
        tokens = np.zeros((cfg.sectors, cfg.depth_bins))
        depth = np.clip(np.asarray(obs.depth_rays) / obs.max_range, 0.0, 1.0)
        bins = np.minimum((depth * cfg.depth_bins).astype(int), cfg.depth_bins - 1)
        for bearing, b in zip(obs.ray_bearings, bins):
            tokens[sector_of(float(bearing), obs.fov, cfg.sectors), b] += 1.0
        counts = tokens.sum(axis=1, keepdims=True)
        return np.divide(tokens, counts, out=np.zeros_like(tokens), where=counts > 0)

    def tokens(self, text: str) -> list[str]:
        return tokenize(text, self.config.lang) or [EMPTY_TOKEN]

    def instruction_tokens(self, text: str) -> np.ndarray:
        """One row per word: its seeded vector scaled by 1 / (1 + zipf frequency)."""
        cfg = self.config
        rows = []
        for token in self.tokens(text):
            weight = 1.0 / (1.0 + zipf_frequency(token, cfg.lang))
            rows.append(weight * _token_vector(token, cfg.token_dim, cfg.seed))
        return np.stack(rows)

    def action_embedding(self, action: DiscreteAction | None) -> np.ndarray:
        """Embedding of the previous action; None is the start-of-episode token."""
        index = START_ACTION if action is None else int(action.kind)
        return self.action_table[index]

    def features(
        self,
        obs: Observation,
        instruction: str | np.ndarray,
        prev_action: DiscreteAction | None = None,
    ) -> FeatureBundle:
        if isinstance(instruction, str):
            instruction = self.instruction_tokens(instruction)
        return FeatureBundle(
            visual=self.visual_tokens(obs),
            depth=self.depth_tokens(obs),
            instruction=instruction,
            prev_action=self.action_embedding(prev_action),
        )
