import functools
import math

import numpy as np
import pytest

from deskvln.bench import Episode, run_episode
from deskvln.control import ControllerKind, Rollout
from deskvln.embodiment import PoseState, default_profile
from deskvln.errors import AlreadyFallen, DimensionMismatch, InvalidRange, ShapeMismatch
from deskvln.policy import FeatureConfig, Featurizer, GruWeights
from deskvln.rdp import (
    RdpConfig,
    RdpPolicy,
    RdpWeights,
    add_noise,
    build_condition,
    denoise_step,
    execute_chunk,
    make_schedule,
    predict_noise,
    predict_stop,
    previous_actions,
    rdp_loss,
    rdp_loss_grad,
    relative_coordinates,
    run_chunk,
    sample_chunk,
    stop_gate,
    stop_progress_at,
    stop_progress_targets,
    timestep_embedding,
    update_history,
)
from deskvln.utils.gradcheck import numeric_gradient, relative_error
from deskvln.world import make_lighting, observe

FLASH = default_profile("flash")
SMALL = FeatureConfig(sectors=2, semantic_bins=4, depth_bins=4, token_dim=8, action_dim=8)


def zero_predictor(cond, a_k, k):
    return np.zeros_like(a_k)


@pytest.mark.parametrize(
    "steps, beta_min, beta_max",
    [(0, 1e-4, 0.2), (10, 0.0, 0.2), (10, 1e-4, 1.0), (10, 0.3, 0.2), (10, 0.1, 0.1)],
)
def test_make_schedule_rejects(steps, beta_min, beta_max):
    with pytest.raises(InvalidRange):
        make_schedule(steps, beta_min, beta_max)


def test_schedule_coefficients():
    sched = make_schedule()
    assert sched.steps == 10
    assert np.all(np.diff(sched.alphas_bar) < 0)
    assert sched.alpha == pytest.approx(1 / np.sqrt(1 - sched.betas))
    assert sched.gamma == pytest.approx(sched.betas / np.sqrt(1 - sched.alphas_bar))
    assert sched.mu[0] == 0.0
    assert np.all(sched.mu[1:] > 0)
    assert make_schedule(1, 0.1, 0.1).steps == 1
    assert not np.any(sched.deterministic().mu)


def test_add_noise():
    sched = make_schedule()
    a0 = np.ones((8, 3))
    assert add_noise(a0, 1, np.zeros_like(a0), sched) == pytest.approx(
        math.sqrt(sched.alphas_bar[0]) * a0
    )
    with pytest.raises(ShapeMismatch):
        add_noise(a0, 1, np.zeros((8, 2)), sched)
    with pytest.raises(InvalidRange):
        add_noise(a0, 11, np.zeros_like(a0), sched)


def test_add_noise_variance_follows_the_schedule():
    sched = make_schedule()
    rng = np.random.default_rng(2)
    a0 = np.full(100_000, 0.7)
    for k in range(1, sched.steps + 1):
        noisy = add_noise(a0, k, rng.standard_normal(a0.shape), sched)
        expected = 1.0 - sched.alphas_bar[k - 1]
        assert noisy.var() == pytest.approx(expected, rel=0.05)
        assert noisy.mean() == pytest.approx(0.7 * math.sqrt(sched.alphas_bar[k - 1]), abs=0.02)


def test_sampling_with_the_true_noise_reconstructs_the_chunk():
    sched = make_schedule(10)

    def true_noise(a0, a_k, k):
        abar = sched.alphas_bar[k - 1]
        return (a_k - math.sqrt(abar) * a0) / math.sqrt(1.0 - abar)

    for seed in range(100):
        a0 = np.random.default_rng(seed).uniform(-1.0, 1.0, (8, 3))
        chunk = sample_chunk(a0, true_noise, sched, rng_seed=seed + 1000)
        assert np.max(np.abs(chunk - a0)) < 0.05


def test_single_step_denoise_recovers_the_clean_chunk():
    sched = make_schedule(1, 0.3, 0.3)
    rng = np.random.default_rng(0)
    a0, eps = rng.normal(size=(8, 3)), rng.normal(size=(8, 3))
    noisy = add_noise(a0, 1, eps, sched)
    assert denoise_step(noisy, 1, eps, sched) == pytest.approx(a0)


def test_denoise_step_without_noise_is_deterministic():
    sched = make_schedule().deterministic()
    a = np.full((8, 3), 2.0)
    eps = np.ones((8, 3))
    expected = sched.alpha[4] * (a - sched.gamma[4] * eps)
    assert denoise_step(a, 5, eps, sched, rng_seed=1) == pytest.approx(expected)
    assert denoise_step(a, 5, eps, sched, rng_seed=2) == pytest.approx(expected)
    with pytest.raises(InvalidRange):
        denoise_step(a, 0, eps, sched)


def test_sample_chunk_shape_and_seed():
    sched = make_schedule()
    a = sample_chunk(None, zero_predictor, sched, rng_seed=4)
    b = sample_chunk(None, zero_predictor, sched, rng_seed=4)
    assert a.shape == (8, 3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_chunk(None, zero_predictor, sched, rng_seed=5))
    assert sample_chunk(None, zero_predictor, sched, 0, horizon=3).shape == (3, 3)


def test_sample_chunk_without_noise_scales_the_draw():
    sched = make_schedule().deterministic()
    draw = np.random.default_rng(7).standard_normal((8, 3))
    chunk = sample_chunk(None, zero_predictor, sched, rng_seed=7)
    assert chunk == pytest.approx(np.prod(sched.alpha) * draw)


def test_timestep_embedding():
    emb = timestep_embedding(0)
    assert emb.shape == (8,)
    assert emb == pytest.approx([0, 0, 0, 0, 1, 1, 1, 1])
    assert not np.allclose(timestep_embedding(3), timestep_embedding(4))


def test_relative_coordinates_use_the_start_frame():
    start = PoseState(1.0, 1.0, math.pi / 2)
    rc = relative_coordinates(start, PoseState(1.0, 3.0, math.pi))
    assert rc == pytest.approx([2.0, 0.0, math.pi / 2])


def test_previous_actions_newest_first_in_the_current_frame():
    poses = [PoseState(0, 0, 0), PoseState(1, 0, 0), PoseState(1, 0, math.pi / 2)]
    pa = previous_actions(poses)
    assert pa.shape == (4, 3)
    assert pa[0] == pytest.approx([0, 0, math.pi / 2])
    assert pa[1] == pytest.approx([0, -1, 0], abs=1e-12)
    assert not pa[2:].any()
    assert not previous_actions([]).any()


def test_update_history_with_zero_weights():
    weights = GruWeights.zeros(4 + 3 + 12, 6)
    h = update_history(np.ones(6), np.ones(4), np.zeros(3), np.zeros((4, 3)), weights)
    assert h == pytest.approx(np.full(6, 0.5))
    with pytest.raises(DimensionMismatch):
        update_history(np.ones(6), np.ones(5), np.zeros(3), np.zeros((4, 3)), weights)


@pytest.fixture
def condition(room):
    weights = RdpWeights.init(0, SMALL, hidden_dim=16, horizon=4)
    obs = observe(room, PoseState(1.5, 2.5), FLASH, make_lighting("DL5000"))
    features = Featurizer(SMALL).features(obs, "go to the table")
    h = np.zeros(16)
    cond = build_condition(h, features, np.zeros(3), np.zeros((4, 3)), weights)
    return weights, cond


def test_condition_and_heads(condition):
    weights, cond = condition
    assert cond.vector.shape == (weights.condition_dim,)
    eps = predict_noise(weights, cond, np.zeros((4, 3)), 2)
    assert eps.shape == (4, 3)
    assert 0.0 < predict_stop(weights, cond) < 1.0
    with pytest.raises(ShapeMismatch):
        predict_noise(weights, cond, np.zeros((8, 3)), 2)
    chunk = sample_chunk(cond, functools.partial(predict_noise, weights), make_schedule(), 0, 4)
    assert chunk.shape == (4, 3)


def test_stop_gate():
    assert stop_gate(np.full((8, 3), 0.05), 0.0)
    assert stop_gate(np.ones((8, 3)), 0.9)
    assert not stop_gate(np.ones((8, 3)), 0.8)
    assert not stop_gate(np.full((8, 3), 0.1), 0.0)
    assert stop_gate(np.zeros((0, 3)), 0.0)


def test_rdp_loss():
    eps, eps_hat = np.zeros((2, 3)), np.ones((2, 3))
    assert rdp_loss(eps, eps, [0.5], [0.5]) == 0.0
    assert rdp_loss(eps, eps_hat, [0.5], [0.0]) == pytest.approx(1.0 + 10.0 * 0.25)
    assert rdp_loss(eps, eps_hat, [0.5], [0.0], lam=0.0) == pytest.approx(1.0)
    with pytest.raises(ShapeMismatch):
        rdp_loss(eps, np.ones(3), [0.5], [0.0])
    with pytest.raises(ShapeMismatch):
        rdp_loss(eps, eps_hat, [0.5, 0.5], [0.0])
    with pytest.raises(InvalidRange):
        rdp_loss(eps, eps_hat, [1.5], [0.0])


def test_rdp_loss_grad_matches_numeric():
    rng = np.random.default_rng(1)
    for _ in range(50):
        rows, stops = rng.integers(1, 9), rng.integers(1, 6)
        eps, eps_hat = rng.normal(size=(rows, 3)), rng.normal(size=(rows, 3))
        stop_pred = rng.uniform(0.05, 0.95, stops)
        stop_gt = rng.uniform(0.0, 1.0, stops)
        lam = rng.uniform(0.5, 20.0)
        d_eps, d_stop = rdp_loss_grad(eps, eps_hat, stop_pred, stop_gt, lam)
        numeric_eps = numeric_gradient(
            lambda x: rdp_loss(eps, x, stop_pred, stop_gt, lam), eps_hat
        )
        numeric_stop = numeric_gradient(
            lambda s: rdp_loss(eps, eps_hat, s, stop_gt, lam), stop_pred
        )
        assert relative_error(d_eps, numeric_eps) < 1e-5
        assert relative_error(d_stop, numeric_stop) < 1e-5


def test_stop_progress():
    path = [(0.0, 0.0), (3.0, 0.0), (3.0, 1.0)]
    assert stop_progress_targets(path) == pytest.approx([0.0, 0.75, 1.0])
    assert stop_progress_targets([(1.0, 1.0), (1.0, 1.0)]) == pytest.approx([1.0, 1.0])
    assert stop_progress_at([(0.0, 0.0), (4.0, 0.0)], (1.0, 1.0)) == pytest.approx(0.25)
    assert stop_progress_at(path, (3.5, 0.5)) == pytest.approx(0.875)
    assert stop_progress_at([(0.0, 0.0)], (5.0, 5.0)) == 1.0


def test_run_chunk_runs_offsets_in_the_body_frame(room):
    rollout = Rollout(room, PoseState(1.5, 2.5, 0.0), FLASH, ControllerKind.FLASH)
    chunk = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [5.0, 0.0, 0.0]])
    pose = run_chunk(chunk, 2, rollout)
    assert pose.position == pytest.approx((2.5, 3.5))
    assert pose.heading == pytest.approx(0.0)
    assert rollout.steps == 2
    with pytest.raises(InvalidRange):
        run_chunk(chunk, 0, rollout)
    with pytest.raises(InvalidRange):
        run_chunk(chunk, 4, rollout)


def test_execute_chunk_starts_from_a_pose(room):
    start = PoseState(1.5, 2.5, math.pi / 2)
    moved = execute_chunk(
        np.array([[1.0, 0.0, 0.0]]), 1, start, ControllerKind.FLASH, FLASH, room
    )
    assert moved.position == pytest.approx((1.5, 3.5))
    assert moved.heading == pytest.approx(math.pi / 2)
    still = execute_chunk(np.zeros((8, 3)), 4, start, ControllerKind.FLASH, FLASH, room)
    assert still.position == pytest.approx(start.position)
    chunk = np.tile([0.5, 0.0, 0.0], (8, 1))
    four = execute_chunk(chunk, 4, PoseState(1.5, 2.5, 0.0), ControllerKind.FLASH, FLASH, room)
    assert four.position == pytest.approx((3.5, 2.5))
    assert four.step_index == 4
    fallen = PoseState(1.5, 2.5, fallen=True)
    with pytest.raises(AlreadyFallen):
        execute_chunk(chunk, 4, fallen, ControllerKind.FLASH, FLASH, room)


def test_rdp_policy_is_deterministic_per_seed(room):
    episode = Episode(
        "ep-0", "room", (1.5, 2.5, 0.0), (7.5, 4.5), ((1.5, 2.5), (7.5, 4.5)), "go to the table"
    )
    lighting = make_lighting("DL300")
    config = RdpConfig(denoise_steps=4, horizon=4, executed=2)
    traces = [
        run_episode(
            episode,
            room,
            RdpPolicy(config=config, seed=1),
            ControllerKind.FLASH,
            FLASH,
            lighting,
            max_steps=12,
            rng_seed=3,
        )
        for _ in range(2)
    ]
    assert traces[0].to_dict() == traces[1].to_dict()
    assert traces[0].terminal is not None
