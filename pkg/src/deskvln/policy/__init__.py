"""
Agents: the policy interface, baselines (random, oracle), recurrent policies (Seq2Seq,
cross-modal attention) with seeded weights, the map-based program agent and a name
registry. The diffusion policy lives in deskvln.rdp and is registered here by name.
"""

from deskvln.policy.nets import (
    ActionHead,
    GruWeights,
    attention_weights,
    gru_step,
    scaled_dot_attention,
    select_action,
)
from deskvln.policy.features import FeatureBundle, FeatureConfig, Featurizer
from deskvln.policy.base import Policy, Sensor
from deskvln.policy.baselines import (
    STOP_PROBABILITY,
    SUCCESS_RADIUS,
    OraclePolicy,
    RandomPolicy,
    oracle_policy_step,
    random_policy_step,
)
from deskvln.policy.seq2seq import Seq2SeqPolicy, Seq2SeqWeights, seq2seq_forward, seq2seq_step
from deskvln.policy.cma import CmaPolicy, CmaWeights, cma_forward, cma_step
from deskvln.policy.vlmaps import VlmapsPolicy
from deskvln.policy.weights import FORMAT_VERSION, load_weights, save_weights
from deskvln.policy.registry import POLICY_NAMES, make_policy
