import math
from collections import Counter

import numpy as np
import pytest
from scipy.stats import chisquare

from deskvln.bench import Episode, run_episode
from deskvln.control import ActionKind, ControllerKind, DiscreteAction, EventKind
from deskvln.control.commands import FORWARD, STOP
from deskvln.embodiment import PoseState, default_profile
from deskvln.errors import DimensionMismatch, SchemaMismatch, ValidationError
from deskvln.plan.geodesic import geodesic_distance
from deskvln.policy import (
    ActionHead,
    CmaPolicy,
    CmaWeights,
    FeatureConfig,
    Featurizer,
    GruWeights,
    OraclePolicy,
    RandomPolicy,
    Seq2SeqPolicy,
    Seq2SeqWeights,
    VlmapsPolicy,
    attention_weights,
    cma_step,
    gru_step,
    load_weights,
    make_policy,
    oracle_policy_step,
    random_policy_step,
    save_weights,
    scaled_dot_attention,
    select_action,
    seq2seq_step,
)
from deskvln.policy.features import EMPTY_TOKEN, sector_of
from deskvln.world import make_lighting, observe

FLASH = default_profile("flash")
DAYLIGHT = make_lighting("DL5000")


def make_episode(start=(1.5, 1.5, 0.0), goal=(8.5, 5.5), subgoals=None, scene_id="room"):
    return Episode(
        episode_id="ep-0",
        scene_id=scene_id,
        start=start,
        goal=goal,
        reference_path=(start[:2], goal),
        instruction_text="walk past the sofa and stop at the table",
        subgoals=subgoals,
    )


@pytest.fixture
def obs(room):
    return observe(room, PoseState(1.5, 2.5, 0.0), FLASH, DAYLIGHT)


def test_gru_step_with_zero_weights_halves_the_state():
    weights = GruWeights.zeros(3, 2)
    h = gru_step(np.ones(3), np.array([1.0, 2.0]), weights)
    assert h == pytest.approx([0.5, 1.0])


def scalar_gru_step(x, h, weights):
    w, u, b = weights.w, weights.u, weights.b
    hidden, inputs = weights.hidden_dim, weights.input_dim

    def gate(g, i, state):
        total = b[g, i]
        for j in range(inputs):
            total += w[g, i, j] * x[j]
        for j in range(hidden):
            total += u[g, i, j] * state[j]
        return total

    z = [1.0 / (1.0 + math.exp(-gate(0, i, h))) for i in range(hidden)]
    r = [1.0 / (1.0 + math.exp(-gate(1, i, h))) for i in range(hidden)]
    gated = [r[i] * h[i] for i in range(hidden)]
    n = [math.tanh(gate(2, i, gated)) for i in range(hidden)]
    return [(1.0 - z[i]) * n[i] + z[i] * h[i] for i in range(hidden)]


def test_gru_step_matches_scalar_loops():
    rng = np.random.default_rng(4)
    for _ in range(20):
        inputs, hidden = rng.integers(1, 6), rng.integers(1, 6)
        weights = GruWeights(
            rng.normal(size=(3, hidden, inputs)),
            rng.normal(size=(3, hidden, hidden)),
            rng.normal(size=(3, hidden)),
        )
        x, h = rng.normal(size=inputs), rng.uniform(-1.0, 1.0, hidden)
        expected = scalar_gru_step(x, h, weights)
        assert np.max(np.abs(gru_step(x, h, weights) - expected)) < 1e-12


def test_gru_state_stays_bounded():
    rng = np.random.default_rng(5)
    weights = GruWeights(
        rng.normal(0.0, 3.0, (3, 8, 4)), rng.normal(0.0, 3.0, (3, 8, 8)), rng.normal(size=(3, 8))
    )
    h = np.zeros(8)
    for x in rng.normal(0.0, 5.0, (10_000, 4)):
        h = gru_step(x, h, weights)
        assert np.all(np.abs(h) <= 1.0)


def test_gru_step_checks_shapes():
    weights = GruWeights.zeros(3, 2)
    with pytest.raises(DimensionMismatch):
        gru_step(np.ones(4), np.zeros(2), weights)
    with pytest.raises(DimensionMismatch):
        gru_step(np.ones(3), np.zeros(3), weights)
    with pytest.raises(DimensionMismatch):
        GruWeights(np.zeros((3, 2, 3)), np.zeros((3, 3, 3)), np.zeros((3, 2)))


def test_attention():
    keys = np.ones((4, 2))
    assert attention_weights(np.array([1.0, -1.0]), keys) == pytest.approx(np.full(4, 0.25))
    values = np.array([[1.0, 2.0, 3.0]])
    assert scaled_dot_attention(np.zeros(2), np.ones((1, 2)), values) == pytest.approx(values[0])
    with pytest.raises(DimensionMismatch):
        attention_weights(np.zeros(3), keys)
    with pytest.raises(DimensionMismatch):
        scaled_dot_attention(np.zeros(2), keys, values)
    with pytest.raises(DimensionMismatch):
        attention_weights(np.zeros(2), np.zeros((0, 2)))


def test_action_head_and_selection():
    head = ActionHead.init(np.random.default_rng(0), hidden_dim=5)
    probs = head.probabilities(np.ones(5))
    assert probs.shape == (4,)
    assert probs.sum() == pytest.approx(1.0)
    assert select_action(np.array([0.2, 0.4, 0.4, 0.0])) == 1
    with pytest.raises(DimensionMismatch):
        head.logits(np.ones(4))


def test_sector_of_clamps_to_the_fan():
    fov = math.radians(90)
    assert sector_of(-fov / 2, fov, 4) == 0
    assert sector_of(fov / 2, fov, 4) == 3
    assert sector_of(0.0, fov, 4) == 2
    assert sector_of(1.0, 0.0, 4) == 0


def test_featurizer(obs):
    featurizer = Featurizer()
    visual = featurizer.visual_tokens(obs)
    depth = featurizer.depth_tokens(obs)
    assert visual.shape == (4, 8)
    assert visual.max() == pytest.approx(0.9)
    assert depth.sum(axis=1) == pytest.approx(np.ones(4))
    words = featurizer.instruction_tokens("Walk to the sofa")
    assert words.shape == (4, 32)
    assert np.array_equal(words, Featurizer().instruction_tokens("walk to the sofa"))
    assert featurizer.tokens("") == [EMPTY_TOKEN]
    start = featurizer.action_embedding(None)
    assert not np.array_equal(start, featurizer.action_embedding(STOP))


def test_rare_words_weigh_more():
    featurizer = Featurizer()
    common, rare = featurizer.instruction_tokens("the armoire")
    assert np.linalg.norm(rare) > np.linalg.norm(common)


def test_seeded_weights_are_reproducible():
    a, b, c = Seq2SeqWeights.init(1), Seq2SeqWeights.init(1), Seq2SeqWeights.init(2)
    assert np.array_equal(a.gru.w, b.gru.w)
    assert not np.array_equal(a.gru.w, c.gru.w)
    assert np.array_equal(CmaWeights.init(1).q_visual, CmaWeights.init(1).q_visual)


def test_seq2seq_and_cma_steps(obs):
    featurizer = Featurizer()
    features = featurizer.features(obs, "go to the sofa", None)
    s2s = Seq2SeqWeights.init(0)
    action, h = seq2seq_step(features, np.zeros(s2s.hidden_dim), s2s)
    assert isinstance(action, DiscreteAction)
    assert h.shape == (s2s.hidden_dim,)
    assert np.all(np.abs(h) < 1)
    cma = CmaWeights.init(0)
    state = (np.zeros(cma.gru1.hidden_dim), np.zeros(cma.gru2.hidden_dim))
    action, (h1, h2) = cma_step(features, state, cma)
    assert action.kind in ActionKind
    assert h1.shape == h2.shape == (cma.gru1.hidden_dim,)
    with pytest.raises(DimensionMismatch):
        seq2seq_step(features, np.zeros(3), s2s)


def test_small_feature_configs_still_fit():
    config = FeatureConfig(sectors=2, semantic_bins=4, depth_bins=4, token_dim=8, action_dim=8)
    policy = CmaPolicy(CmaWeights.init(0, config, hidden_dim=16), Featurizer(config))
    assert policy.initial_state()[0].shape == (16,)


@pytest.mark.parametrize("policy_cls", [Seq2SeqPolicy, CmaPolicy])
def test_recurrent_policies_are_deterministic(room, obs, policy_cls):
    episode = make_episode()
    runs = []
    for _ in range(2):
        policy = policy_cls(seed=5)
        policy.reset(episode, room)
        runs.append([policy.act(obs, PoseState(1.5, 2.5)) for _ in range(5)])
    assert runs[0] == runs[1]


def test_weights_file_round_trip(tmp_path):
    weights = CmaWeights.init(3)
    path = save_weights(tmp_path / "cma.npz", weights)
    loaded = load_weights(path)
    assert isinstance(loaded, CmaWeights)
    assert loaded.seed == 3
    assert np.array_equal(loaded.gru2.u, weights.gru2.u)
    assert np.array_equal(loaded.head.w, weights.head.w)


def test_weights_file_errors(tmp_path):
    path = save_weights(tmp_path / "s2s.npz", Seq2SeqWeights.init(0))
    with pytest.raises(SchemaMismatch):
        load_weights(path, kind="cma")
    bare = tmp_path / "bare.npz"
    with open(bare, "wb") as f:
        np.savez(f, x=np.zeros(2))
    with pytest.raises(SchemaMismatch):
        load_weights(bare)


def test_random_policy_step():
    assert random_policy_step(0, stop_probability=1.0) == STOP
    rng = np.random.default_rng(0)
    actions = [random_policy_step(rng, stop_probability=0.0) for _ in range(200)]
    assert STOP not in actions
    assert {a.kind for a in actions} == {
        ActionKind.FORWARD,
        ActionKind.TURN_LEFT,
        ActionKind.TURN_RIGHT,
    }


def test_random_policy_frequencies():
    rng = np.random.default_rng(6)
    counts = Counter(random_policy_step(rng).kind for _ in range(100_000))
    assert counts[ActionKind.STOP] / 100_000 == pytest.approx(0.02, abs=0.005)
    kinds = (ActionKind.FORWARD, ActionKind.TURN_LEFT, ActionKind.TURN_RIGHT)
    moves = [counts[kind] for kind in kinds]
    assert chisquare(moves).pvalue > 1e-3


def test_random_policy_is_seeded(room):
    episode = make_episode()
    runs = []
    for _ in range(2):
        policy = RandomPolicy()
        policy.reset(episode, room, rng_seed=9)
        runs.append([policy.act(None, episode.start_pose) for _ in range(30)])
    assert runs[0] == runs[1]


def test_oracle_step(room):
    episode = make_episode()
    assert oracle_policy_step(episode, PoseState(7.5, 4.5), room) == STOP
    # facing the first diagonal step of the shortest path
    assert oracle_policy_step(episode, PoseState(1.5, 1.5, math.pi / 4), room) == FORWARD
    turn = oracle_policy_step(episode, PoseState(1.5, 1.5, math.pi), room)
    assert turn.kind in (ActionKind.TURN_LEFT, ActionKind.TURN_RIGHT)


def test_oracle_stop_distance_is_configurable(room):
    episode = make_episode(start=(3.5, 2.5, 0.0), goal=(4.5, 2.5))
    ahead = PoseState(3.5, 2.5, 0.0)
    assert oracle_policy_step(episode, ahead, room) == STOP
    assert oracle_policy_step(episode, ahead, room, success_radius=0.5) == FORWARD
    policy = OraclePolicy(success_radius=0.5)
    policy.reset(episode, room)
    assert policy.act(None, ahead) == FORWARD


def test_oracle_reaches_the_goal(room):
    episode = make_episode()
    trace = run_episode(episode, room, OraclePolicy(), ControllerKind.FLASH, FLASH, DAYLIGHT)
    assert trace.terminal.kind is EventKind.STOP
    assert geodesic_distance(room, trace.final_pose.position, episode.goal) <= 3.0 + 1e-9


def test_vlmaps_without_program_stops_at_once(room):
    trace = run_episode(
        make_episode(), room, VlmapsPolicy(), ControllerKind.FLASH, FLASH, DAYLIGHT
    )
    assert trace.steps == 0
    assert trace.terminal.kind is EventKind.STOP


def test_registry(tmp_path):
    assert isinstance(make_policy("random"), RandomPolicy)
    assert isinstance(make_policy("oracle", success_radius=1.0), OraclePolicy)
    assert make_policy("oracle", success_radius=1.0).success_radius == 1.0
    assert isinstance(make_policy("vlmaps"), VlmapsPolicy)
    assert make_policy("rdp").name == "rdp"
    with pytest.raises(ValidationError):
        make_policy("teleport")
    weights = save_weights(tmp_path / "cma.npz", CmaWeights.init(0))
    with pytest.raises(ValidationError):
        make_policy("random", weights_path=weights)
    with pytest.raises(SchemaMismatch):
        make_policy("seq2seq", weights_path=weights)
    assert make_policy("cma", weights_path=weights).weights.seed == 0
