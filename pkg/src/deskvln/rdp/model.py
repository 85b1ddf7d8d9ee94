"""
Recurrent diffusion policy networks.

A history GRU runs over [V_c, RC, PA] (current visual tokens, pose relative to the
start, last four actions relative to the current pose). The condition vector is

    c_t = [g1, g2, h_t, RC, PA]

where g1 and g2 are mean-pooled cross-attention between the instruction tokens and the
query tokens built from h_t and V_c. A two-layer noise predictor reads [c_t, a_k, k] and
a sigmoid stop head reads c_t.
"""
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import expit

from deskvln.embodiment.pose import PoseState, normalize_angle
from deskvln.errors import DimensionMismatch, InvalidRange, ShapeMismatch
from deskvln.policy.features import FeatureBundle, FeatureConfig
from deskvln.policy.nets import GruWeights, gru_step, scaled_dot_attention
from deskvln.rdp.schedule import ACTION_DIM, HORIZON
from deskvln.utils.seeding import derive_seed
from deskvln.utils.typehints import Point

HISTORY_DIM = 64
PA_STEPS = 4
RC_DIM = 3
TIME_DIM = 8
PREDICTOR_HIDDEN = 128
STOP_HIDDEN = 32
ACTION_THRESHOLD = 0.1
PROGRESS_THRESHOLD = 0.8
STOP_LOSS_WEIGHT = 10.0


@dataclass(frozen=True, eq=False)
class Mlp:
    """Two-layer perceptron: w2 @ tanh(w1 @ x + b1) + b2."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        hidden, _ = self.w1.shape
        if self.b1.shape != (hidden,) or self.w2.shape[1:] != (hidden,):
            raise DimensionMismatch(f"bad MLP shapes {self.w1.shape}, {self.w2.shape}")
        if self.b2.shape != (self.w2.shape[0],):
            raise DimensionMismatch(f"bad MLP output bias {self.b2.shape}")

    @property
    def input_dim(self) -> int:
        return self.w1.shape[1]

    @property
    def output_dim(self) -> int:
        return self.w2.shape[0]

    @classmethod
    def init(cls, rng: np.random.Generator, input_dim: int, hidden: int, output: int) -> "Mlp":
        return cls(
            rng.normal(0.0, math.sqrt(2.0 / (input_dim + hidden)), (hidden, input_dim)),
            np.zeros(hidden),
            rng.normal(0.0, math.sqrt(2.0 / (hidden + output)), (output, hidden)),
            np.zeros(output),
        )

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if np.shape(x) != (self.input_dim,):
            raise DimensionMismatch(f"MLP input {np.shape(x)}, expected ({self.input_dim},)")
        return self.w2 @ np.tanh(self.w1 @ x + self.b1) + self.b2


@dataclass(frozen=True, eq=False)
class RdpWeights:
    """
    Attributes:
        history: GRU over [V_c, RC, PA]
        query_h: Projects h_t to one query token
        query_v: Projects each visual sector token to a query token
        predictor: Noise predictor over [c_t, a_k, time embedding]
        stop: Stop-progress head over c_t (sigmoid applied on top)
        seed: Initialization seed
    """

    KIND = "rdp"

    history: GruWeights
    query_h: np.ndarray
    query_v: np.ndarray
    predictor: Mlp
    stop: Mlp
    seed: int | None = None

    def __post_init__(self):
        token_dim = self.query_h.shape[0]
        if self.query_h.shape != (token_dim, self.history.hidden_dim):
            raise DimensionMismatch(f"query_h has shape {self.query_h.shape}")
        if self.query_v.ndim != 2 or self.query_v.shape[0] != token_dim:
            raise DimensionMismatch(f"query_v has shape {self.query_v.shape}")
        if self.stop.output_dim != 1 or self.stop.input_dim != self.condition_dim:
            raise DimensionMismatch("stop head does not match the condition size")
        if self.predictor.input_dim - self.predictor.output_dim != self.condition_dim + TIME_DIM:
            raise DimensionMismatch("noise predictor does not match the condition size")

    @property
    def token_dim(self) -> int:
        return self.query_h.shape[0]

    @property
    def condition_dim(self) -> int:
        return 2 * self.token_dim + self.history.hidden_dim + RC_DIM + PA_STEPS * ACTION_DIM

    @property
    def horizon(self) -> int:
        return self.predictor.output_dim // ACTION_DIM

    @classmethod
    def init(
        cls,
        seed: int,
        features: FeatureConfig = FeatureConfig(),
        hidden_dim: int = HISTORY_DIM,
        horizon: int = HORIZON,
    ) -> "RdpWeights":
        rng = np.random.default_rng(derive_seed(seed, cls.KIND))
        f = features
        v_scale = 1.0 / math.sqrt(f.semantic_bins)
        cond_dim = 2 * f.token_dim + hidden_dim + RC_DIM + PA_STEPS * ACTION_DIM
        chunk_dim = horizon * ACTION_DIM
        scale = 1.0 / math.sqrt(hidden_dim)
        return cls(
            history=GruWeights.init(rng, f.visual_dim + RC_DIM + PA_STEPS * ACTION_DIM, hidden_dim),
            query_h=rng.normal(0.0, scale, (f.token_dim, hidden_dim)),
            query_v=rng.normal(0.0, v_scale, (f.token_dim, f.semantic_bins)),
            predictor=Mlp.init(rng, cond_dim + chunk_dim + TIME_DIM, PREDICTOR_HIDDEN, chunk_dim),
            stop=Mlp.init(rng, cond_dim, STOP_HIDDEN, 1),
            seed=seed,
        )


@dataclass(frozen=True)
class RdpCondition:
    """
    Attributes:
        g1: Query tokens attending over the instruction, mean-pooled
        g2: Instruction tokens attending over the query tokens, mean-pooled
        h: History GRU state
        rc: (dx, dy, dyaw) of the current pose in the start frame
        pa: (4, 3) last actions in the current body frame, newest first
    """

    g1: np.ndarray
    g2: np.ndarray
    h: np.ndarray
    rc: np.ndarray
    pa: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.g1, self.g2, self.h, self.rc, self.pa.ravel()])


def to_body_frame(dx: float, dy: float, heading: float) -> Point:
    """Rotate a world-frame displacement into the frame of a body facing heading."""
    c, s = math.cos(heading), math.sin(heading)
    return c * dx + s * dy, -s * dx + c * dy


def relative_coordinates(start: PoseState, pose: PoseState) -> np.ndarray:
    """pose relative to start, in the start frame: (dx, dy, dyaw)."""
    dx, dy = to_body_frame(pose.x - start.x, pose.y - start.y, start.heading)
    return np.array([dx, dy, normalize_angle(pose.heading - start.heading)])


def previous_actions(poses: Sequence[PoseState], steps: int = PA_STEPS) -> np.ndarray:
    """
    The last steps displacements between consecutive poses, newest first, expressed in the
    body frame of the latest pose. Missing rows are zero.
    """
    out = np.zeros((steps, ACTION_DIM))
    if not poses:
        return out
    current = poses[-1]
    pairs = list(zip(poses[:-1], poses[1:]))[::-1][:steps]
    for i, (a, b) in enumerate(pairs):
        dx, dy = to_body_frame(b.x - a.x, b.y - a.y, current.heading)
        out[i] = dx, dy, normalize_angle(b.heading - a.heading)
    return out


def update_history(
    h_prev: np.ndarray,
    v_c: np.ndarray,
    rc: np.ndarray,
    pa: np.ndarray,
    weights: GruWeights,
) -> np.ndarray:
    """
    h_t = GRU([V_c, RC, PA], h_{t-1})

    Raises:
        DimensionMismatch: the concatenation or h_prev does not fit weights
    """
    x = np.concatenate([np.ravel(v_c), np.ravel(rc), np.ravel(pa)])
    return gru_step(x, h_prev, weights)


def build_condition(
    h: np.ndarray,
    features: FeatureBundle,
    rc: np.ndarray,
    pa: np.ndarray,
    weights: RdpWeights,
) -> RdpCondition:
    """Cross-attend the instruction with the (h, visual) query tokens and assemble c_t."""
    queries = np.vstack([weights.query_h @ h, features.visual @ weights.query_v.T])
    instruction = features.instruction
    g1 = np.mean([scaled_dot_attention(q, instruction, instruction) for q in queries], axis=0)
    g2 = np.mean([scaled_dot_attention(t, queries, queries) for t in instruction], axis=0)
    return RdpCondition(g1, g2, np.asarray(h, dtype=float), np.asarray(rc), np.asarray(pa))


def timestep_embedding(k: int, dim: int = TIME_DIM) -> np.ndarray:
    """Sinusoidal embedding of the denoising step: [sin(k f_i), cos(k f_i)]."""
    half = dim // 2
    freqs = np.exp(-math.log(10000.0) * np.arange(half) / half)
    return np.concatenate([np.sin(k * freqs), np.cos(k * freqs)])


def predict_noise(
    weights: RdpWeights, cond: RdpCondition, a_k: np.ndarray, k: int
) -> np.ndarray:
    """Noise estimate shaped like a_k; bind weights with functools.partial for sample_chunk."""
    a_k = np.asarray(a_k, dtype=float)
    if a_k.shape != (weights.horizon, ACTION_DIM):
        raise ShapeMismatch(f"chunk has shape {a_k.shape}, expected ({weights.horizon}, 3)")
    x = np.concatenate([cond.vector, a_k.ravel(), timestep_embedding(k)])
    return weights.predictor(x).reshape(a_k.shape)


def predict_stop(weights: RdpWeights, cond: RdpCondition) -> float:
    """Stop progress in [0, 1]."""
    return float(expit(weights.stop(cond.vector)[0]))


def stop_gate(
    chunk: np.ndarray,
    stop_progress: float,
    action_threshold: float = ACTION_THRESHOLD,
    progress_threshold: float = PROGRESS_THRESHOLD,
) -> bool:
    """True when every |entry| of chunk is below action_threshold or progress exceeds its bar."""
    chunk = np.asarray(chunk, dtype=float)
    small = chunk.size == 0 or float(np.max(np.abs(chunk))) < action_threshold
    return small or stop_progress > progress_threshold


def _stop_arrays(stop_pred, stop_gt) -> tuple[np.ndarray, np.ndarray]:
    stop_pred = np.asarray(stop_pred, dtype=float)
    stop_gt = np.asarray(stop_gt, dtype=float)
    if stop_pred.shape != stop_gt.shape:
        raise ShapeMismatch(f"stop prediction {stop_pred.shape} vs target {stop_gt.shape}")
    for name, values in (("prediction", stop_pred), ("target", stop_gt)):
        if np.any((values < 0) | (values > 1)):
            raise InvalidRange(f"stop {name} outside [0, 1]")
    return stop_pred, stop_gt


def _noise_arrays(eps, eps_hat) -> tuple[np.ndarray, np.ndarray]:
    eps = np.asarray(eps, dtype=float)
    eps_hat = np.asarray(eps_hat, dtype=float)
    if eps.shape != eps_hat.shape:
        raise ShapeMismatch(f"noise {eps.shape} vs prediction {eps_hat.shape}")
    return eps, eps_hat


def rdp_loss(eps, eps_hat, stop_pred, stop_gt, lam: float = STOP_LOSS_WEIGHT) -> float:
    """
    MSE(eps, eps_hat) + lam * MSE(stop_pred, stop_gt)

    Raises:
        ShapeMismatch: eps and eps_hat, or the stop arrays, differ in shape
        InvalidRange: stop values outside [0, 1]
    """
    eps, eps_hat = _noise_arrays(eps, eps_hat)
    stop_pred, stop_gt = _stop_arrays(stop_pred, stop_gt)
    return float(np.mean((eps - eps_hat) ** 2) + lam * np.mean((stop_pred - stop_gt) ** 2))


def rdp_loss_grad(
    eps, eps_hat, stop_pred, stop_gt, lam: float = STOP_LOSS_WEIGHT
) -> tuple[np.ndarray, np.ndarray]:
    """Gradients of rdp_loss with respect to eps_hat and stop_pred."""
    eps, eps_hat = _noise_arrays(eps, eps_hat)
    stop_pred, stop_gt = _stop_arrays(stop_pred, stop_gt)
    d_eps = 2.0 * (eps_hat - eps) / eps.size
    d_stop = 2.0 * lam * (stop_pred - stop_gt) / max(stop_pred.size, 1)
    return d_eps, d_stop


def stop_progress_targets(reference_path: Sequence[Point]) -> np.ndarray:
    """Covered fraction of the path length at each vertex; all ones for a zero-length path."""
    pts = np.asarray(reference_path, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return np.zeros(0)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    covered = np.concatenate([[0.0], np.cumsum(seg)])
    total = covered[-1]
    if total == 0:
        return np.ones(len(pts))
    return covered / total


def stop_progress_at(reference_path: Sequence[Point], point: Point) -> float:
    """Covered fraction at the projection of point onto the nearest path segment."""
    pts = np.asarray(reference_path, dtype=float).reshape(-1, 2)
    if len(pts) < 2:
        return 1.0
    p = np.asarray(point, dtype=float)
    seg = np.diff(pts, axis=0)
    lengths = np.linalg.norm(seg, axis=1)
    total = lengths.sum()
    if total == 0:
        return 1.0
    sq = np.maximum(lengths**2, 1e-18)
    t = np.clip(np.einsum("ij,ij->i", p - pts[:-1], seg) / sq, 0.0, 1.0)
    nearest = pts[:-1] + t[:, None] * seg
    i = int(np.argmin(np.linalg.norm(nearest - p, axis=1)))
    before = lengths[:i].sum()
    return float((before + t[i] * lengths[i]) / total)
