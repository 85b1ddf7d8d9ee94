"""
DDPM noise schedule, forward noising and the reverse update used to sample action chunks.

The reverse update is

    a_{k-1} = alpha_k * (a_k - gamma_k * eps_hat + N(0, mu_k^2 I))

with alpha_k = 1 / sqrt(1 - beta_k), gamma_k = beta_k / sqrt(1 - abar_k) and
mu_k = sqrt(1 - beta_k) * sigma_k, where sigma_k is the DDPM posterior standard deviation
and mu_1 = 0. This is the standard DDPM ancestral sampler written in a scaled form.
"""
import dataclasses
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from deskvln.errors import InvalidRange, ShapeMismatch
from deskvln.utils.seeding import as_generator
from deskvln.utils.typehints import Seed

DENOISE_STEPS = 10
BETA_MIN = 1e-4
BETA_MAX = 0.2
HORIZON = 8
ACTION_DIM = 3

NoisePredictor = Callable[[object, np.ndarray, int], np.ndarray]


@dataclass(frozen=True, eq=False)
class NoiseSchedule:
    """
    Per-step coefficients, index k - 1 for denoising step k.

    Attributes:
        betas: Variance schedule, strictly increasing in (0, 1)
        alphas_bar: Cumulative products of (1 - beta)
        alpha: Reverse-update scale 1 / sqrt(1 - beta)
        gamma: Noise-prediction weight beta / sqrt(1 - abar)
        mu: Standard deviation of the injected noise before scaling by alpha
    """

    betas: np.ndarray
    alphas_bar: np.ndarray
    alpha: np.ndarray
    gamma: np.ndarray
    mu: np.ndarray

    @property
    def steps(self) -> int:
        return len(self.betas)

    def check_step(self, k: int) -> None:
        if not 1 <= k <= self.steps:
            raise InvalidRange(f"denoising step {k} outside [1, {self.steps}]")

    def deterministic(self) -> "NoiseSchedule":
        """Same schedule with the injected noise switched off."""
        return dataclasses.replace(self, mu=np.zeros_like(self.mu))


def make_schedule(
    steps: int = DENOISE_STEPS, beta_min: float = BETA_MIN, beta_max: float = BETA_MAX
) -> NoiseSchedule:
    """
    Linear betas from beta_min to beta_max and the derived reverse-update coefficients.

    Raises:
        InvalidRange: steps < 1, betas outside (0, 1), or beta_min >= beta_max with
            more than one step
    """
    if steps < 1:
        raise InvalidRange(f"need at least one denoising step, got {steps}")
    if not 0.0 < beta_min <= beta_max < 1.0:
        raise InvalidRange(f"betas must satisfy 0 < {beta_min} <= {beta_max} < 1")
    if steps > 1 and beta_min == beta_max:
        raise InvalidRange("betas must be strictly increasing")
    betas = np.linspace(beta_min, beta_max, steps)
    alphas_bar = np.cumprod(1.0 - betas)
    prev_bar = np.concatenate([[1.0], alphas_bar[:-1]])
    sigma = np.sqrt(betas * (1.0 - prev_bar) / (1.0 - alphas_bar))
    return NoiseSchedule(
        betas=betas,
        alphas_bar=alphas_bar,
        alpha=1.0 / np.sqrt(1.0 - betas),
        gamma=betas / np.sqrt(1.0 - alphas_bar),
        mu=np.sqrt(1.0 - betas) * sigma,
    )


def _check_shapes(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape != b.shape:
        raise ShapeMismatch(f"{what} has shape {b.shape}, expected {a.shape}")


def add_noise(a0: np.ndarray, k: int, eps: np.ndarray, sched: NoiseSchedule) -> np.ndarray:
    """
    a_k = sqrt(abar_k) * a0 + sqrt(1 - abar_k) * eps

    Raises:
        ShapeMismatch: eps is not shaped like a0
        InvalidRange: k outside [1, K]
    """
    a0 = np.asarray(a0, dtype=float)
    eps = np.asarray(eps, dtype=float)
    _check_shapes(a0, eps, "noise")
    sched.check_step(k)
    abar = sched.alphas_bar[k - 1]
    return math.sqrt(abar) * a0 + math.sqrt(1.0 - abar) * eps


def denoise_step(
    a_k: np.ndarray,
    k: int,
    eps_hat: np.ndarray,
    sched: NoiseSchedule,
    rng_seed: Seed = None,
) -> np.ndarray:
    """
    One reverse step from a_k to a_{k-1}. No noise is drawn when mu_k is zero.

    Raises:
        ShapeMismatch: eps_hat is not shaped like a_k
        InvalidRange: k outside [1, K]
    """
    a_k = np.asarray(a_k, dtype=float)
    eps_hat = np.asarray(eps_hat, dtype=float)
    _check_shapes(a_k, eps_hat, "predicted noise")
    sched.check_step(k)
    i = k - 1
    out = a_k - sched.gamma[i] * eps_hat
    if sched.mu[i] > 0:
        out = out + sched.mu[i] * as_generator(rng_seed).standard_normal(a_k.shape)
    return sched.alpha[i] * out


def sample_chunk(
    cond,
    predictor: NoisePredictor,
    sched: NoiseSchedule,
    rng_seed: Seed = None,
    horizon: int = HORIZON,
) -> np.ndarray:
    """
    Draw a_K ~ N(0, I) of shape (horizon, 3) and denoise it for k = K..1.

    Args:
        cond: Condition handed to predictor unchanged
        predictor: Maps (cond, a_k, k) to predicted noise shaped like a_k
        sched: Noise schedule
        rng_seed: Seed or Generator; a_K is the first draw
        horizon: Waypoints per chunk

    Returns:
        (horizon, 3) array of (dx, dy, dyaw) waypoints
    """
    rng = as_generator(rng_seed)
    a = rng.standard_normal((horizon, ACTION_DIM))
    for k in range(sched.steps, 0, -1):
        a = denoise_step(a, k, predictor(cond, a, k), sched, rng)
    return a
