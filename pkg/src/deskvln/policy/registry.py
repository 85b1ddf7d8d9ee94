"""
Policies by name.
"""
from pathlib import Path

from deskvln.errors import ValidationError
from deskvln.policy.base import Policy
from deskvln.policy.baselines import SUCCESS_RADIUS, OraclePolicy, RandomPolicy
from deskvln.policy.cma import CmaPolicy
from deskvln.policy.seq2seq import Seq2SeqPolicy
from deskvln.policy.vlmaps import VlmapsPolicy
from deskvln.policy.weights import load_weights
from deskvln.semnav.executor import NavigatorConfig
from deskvln.utils.typehints import Meters

POLICY_NAMES = ("random", "oracle", "seq2seq", "cma", "rdp", "vlmaps")
LEARNED = ("seq2seq", "cma", "rdp")


def make_policy(
    name: str,
    *,
    seed: int = 0,
    weights_path: str | Path | None = None,
    success_radius: Meters = SUCCESS_RADIUS,
    navigator: NavigatorConfig = NavigatorConfig(),
    rdp=None,
) -> Policy:
    """
    Build a registered policy.

    Args:
        name: One of POLICY_NAMES
        seed: Weight initialization seed for the learned policies
        weights_path: Weight file for a learned policy; seeded weights when None
        success_radius: Stop radius of the oracle
        navigator: Settings of the map-based agent
        rdp: RdpConfig of the diffusion policy; defaults when None

    Raises:
        ValidationError: unknown name, or weights given for a policy without weights
        SchemaMismatch: the weight file does not hold weights of this policy
    """
    if name not in POLICY_NAMES:
        raise ValidationError(f"unknown policy {name!r}; registered: {', '.join(POLICY_NAMES)}")
    if weights_path is not None and name not in LEARNED:
        raise ValidationError(f"policy {name!r} takes no weights")
    weights = None if weights_path is None else load_weights(weights_path, kind=name)
    if name == "random":
        return RandomPolicy()
    if name == "oracle":
        return OraclePolicy(success_radius)
    if name == "seq2seq":
        return Seq2SeqPolicy(weights, seed=seed)
    if name == "cma":
        return CmaPolicy(weights, seed=seed)
    if name == "vlmaps":
        return VlmapsPolicy(navigator)
    from deskvln.rdp.policy import RdpConfig, RdpPolicy

    return RdpPolicy(weights, config=rdp or RdpConfig(), seed=seed)
