"""
Forward-pass building blocks shared by the recurrent policies: a GRU cell, scaled
dot-product attention and the softmax action head.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, softmax

from deskvln.errors import DimensionMismatch


@dataclass(frozen=True, eq=False)
class GruWeights:
    """
    Gate weights stacked in (update, reset, candidate) order.

    Attributes:
        w: (3, hidden, input) input weights
        u: (3, hidden, hidden) recurrent weights
        b: (3, hidden) biases
    """

    w: np.ndarray
    u: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        hidden = self.b.shape[-1] if self.b.ndim == 2 else -1
        if self.b.shape != (3, hidden) or self.w.ndim != 3 or self.w.shape[:2] != (3, hidden):
            raise DimensionMismatch(f"bad GRU weight shapes {self.w.shape}, {self.b.shape}")
        if self.u.shape != (3, hidden, hidden):
            raise DimensionMismatch(f"recurrent weights {self.u.shape}, hidden size {hidden}")

    @property
    def input_dim(self) -> int:
        return self.w.shape[2]

    @property
    def hidden_dim(self) -> int:
        return self.b.shape[1]

    @classmethod
    def zeros(cls, input_dim: int, hidden_dim: int) -> "GruWeights":
        return cls(
            np.zeros((3, hidden_dim, input_dim)),
            np.zeros((3, hidden_dim, hidden_dim)),
            np.zeros((3, hidden_dim)),
        )

    @classmethod
    def init(cls, rng: np.random.Generator, input_dim: int, hidden_dim: int) -> "GruWeights":
        """Xavier-normal matrices, zero biases."""
        w = rng.normal(0.0, np.sqrt(2.0 / (input_dim + hidden_dim)), (3, hidden_dim, input_dim))
        u = rng.normal(0.0, np.sqrt(1.0 / hidden_dim), (3, hidden_dim, hidden_dim))
        return cls(w, u, np.zeros((3, hidden_dim)))


def gru_step(x: np.ndarray, h: np.ndarray, weights: GruWeights) -> np.ndarray:
    """
    One GRU update:

        z  = sigmoid(W_z x + U_z h + b_z)
        r  = sigmoid(W_r x + U_r h + b_r)
        n  = tanh(W_n x + U_n (r * h) + b_n)
        h' = (1 - z) * n + z * h

    Raises:
        DimensionMismatch: x or h does not fit the weights
    """
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    if x.shape != (weights.input_dim,):
        raise DimensionMismatch(f"GRU input has shape {x.shape}, expected ({weights.input_dim},)")
    if h.shape != (weights.hidden_dim,):
        raise DimensionMismatch(f"GRU state has shape {h.shape}, expected ({weights.hidden_dim},)")
    w, u, b = weights.w, weights.u, weights.b
    z = expit(w[0] @ x + u[0] @ h + b[0])
    r = expit(w[1] @ x + u[1] @ h + b[1])
    n = np.tanh(w[2] @ x + u[2] @ (r * h) + b[2])
    return (1.0 - z) * n + z * h


def attention_weights(q: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """softmax(q . K^T / sqrt(d)) over the rows of keys."""
    q = np.asarray(q, dtype=float)
    keys = np.atleast_2d(np.asarray(keys, dtype=float))
    if keys.shape[0] == 0:
        raise DimensionMismatch("attention needs at least one key")
    if q.shape != (keys.shape[1],):
        raise DimensionMismatch(f"query {q.shape} does not match key width {keys.shape[1]}")
    return softmax(keys @ q / np.sqrt(keys.shape[1]))


def scaled_dot_attention(q: np.ndarray, keys: np.ndarray, values: np.ndarray) -> np.ndarray:
    """
    Raises:
        DimensionMismatch: key and value counts differ, or q does not match the keys
    """
    values = np.atleast_2d(np.asarray(values, dtype=float))
    keys = np.atleast_2d(np.asarray(keys, dtype=float))
    if keys.shape[0] != values.shape[0]:
        raise DimensionMismatch(f"{keys.shape[0]} keys but {values.shape[0]} values")
    return attention_weights(q, keys) @ values


@dataclass(frozen=True, eq=False)
class ActionHead:
    """Linear layer over the hidden state followed by a softmax over the actions."""

    w: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.w.ndim != 2 or self.b.shape != (self.w.shape[0],):
            raise DimensionMismatch(f"bad action head shapes {self.w.shape}, {self.b.shape}")

    @classmethod
    def init(cls, rng: np.random.Generator, hidden_dim: int, n_actions: int = 4) -> "ActionHead":
        scale = np.sqrt(2.0 / (hidden_dim + n_actions))
        return cls(rng.normal(0.0, scale, (n_actions, hidden_dim)), np.zeros(n_actions))

    def logits(self, h: np.ndarray) -> np.ndarray:
        if np.shape(h) != (self.w.shape[1],):
            raise DimensionMismatch(f"head input {np.shape(h)}, expected ({self.w.shape[1]},)")
        return self.w @ h + self.b

    def probabilities(self, h: np.ndarray) -> np.ndarray:
        return softmax(self.logits(h))


def select_action(probabilities: np.ndarray) -> int:
    """Index of the most probable action (first on ties)."""
    return int(np.argmax(probabilities))
