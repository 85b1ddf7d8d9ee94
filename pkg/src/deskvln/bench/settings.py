"""
Simulation settings assembled from the layered configuration.

Library code takes explicit config objects; SimConfig is the one place that reads
DVLN_* keys and turns them into those objects.
"""
from dataclasses import dataclass, field

from deskvln.bench.sampling import SamplingConfig
from deskvln.control.commands import ControlLimits
from deskvln.embodiment.profile import RobotProfile, default_profile, profile_from_config
from deskvln.plan.costgrid import PlannerConfig
from deskvln.rdp.policy import RdpConfig
from deskvln.semnav.executor import NavigatorConfig
from deskvln.utils.env import Env
from deskvln.world.lighting import LightingCondition, make_lighting
from deskvln.world.observe import ObservationConfig

PROFILE_PREFIX = "DVLN_PROFILE_"


@dataclass(frozen=True)
class SimConfig:
    observation: ObservationConfig = ObservationConfig()
    limits: ControlLimits = ControlLimits()
    planner: PlannerConfig = PlannerConfig()
    navigator: NavigatorConfig = NavigatorConfig()
    sampling: SamplingConfig = SamplingConfig()
    rdp: RdpConfig = RdpConfig()
    dl300_sigma: float = 0.3
    cl_sigma: float = 0.15
    cl_falloff: float = 1.0
    profile_overrides: dict[str, str] = field(default_factory=dict)

    def lighting(self, kind: str) -> LightingCondition:
        return make_lighting(kind, self.dl300_sigma, self.cl_sigma, self.cl_falloff)

    def profile(self, kind: str, overrides: dict[str, str] | None = None) -> RobotProfile:
        """
        The default profile of kind with DVLN_PROFILE_<FIELD> overrides applied, then
        overrides (e.g. from --profile-set).

        Raises:
            ValidationError: unknown field or invalid value
        """
        changes = {**self.profile_overrides, **(overrides or {})}
        base = default_profile(kind)
        return profile_from_config(changes, base) if changes else base

    @classmethod
    def from_env(cls, env: Env) -> "SimConfig":
        """Build every config object from env, falling back to the dataclass defaults."""
        d = cls()

        def num(key: str, default, type=float):
            return env.get_as(f"DVLN_{key}", type, default)

        planner = PlannerConfig(
            dilation_radius=num("DILATION_RADIUS", d.planner.dilation_radius),
            dilated_cost=num("DILATED_COST", d.planner.dilated_cost),
            unexplored_cost=num("UNEXPLORED_COST", d.planner.unexplored_cost),
        )
        observation = ObservationConfig(
            fov_deg=num("FOV_DEG", d.observation.fov_deg),
            rays=num("RAYS", d.observation.rays, int),
            max_range=num("MAX_RANGE", d.observation.max_range),
            height_sensitivity=num("HEIGHT_SENSITIVITY", d.observation.height_sensitivity),
        )
        navigator = NavigatorConfig(
            planner=planner,
            observation=observation,
            detection_threshold=num("DETECTION_THRESHOLD", d.navigator.detection_threshold),
            room_threshold=num("ROOM_THRESHOLD", d.navigator.room_threshold),
            reorient_alpha=num("REORIENT_ALPHA", d.navigator.reorient_alpha),
        )
        sampling = SamplingConfig(
            min_len=num("MIN_LEN", d.sampling.min_len),
            max_len=num("MAX_LEN", d.sampling.max_len),
            similarity_radius=num("SIMILARITY_RADIUS", d.sampling.similarity_radius),
            attempts_per_episode=num(
                "ATTEMPTS_PER_EPISODE", d.sampling.attempts_per_episode, int
            ),
            planner=planner,
        )
        return cls(
            observation=observation,
            limits=ControlLimits(
                v_max=num("V_MAX", d.limits.v_max),
                omega_max=num("OMEGA_MAX", d.limits.omega_max),
                dt=num("DT", d.limits.dt),
            ),
            planner=planner,
            navigator=navigator,
            sampling=sampling,
            rdp=RdpConfig(
                denoise_steps=num("DENOISE_STEPS", d.rdp.denoise_steps, int),
                beta_min=num("BETA_MIN", d.rdp.beta_min),
                beta_max=num("BETA_MAX", d.rdp.beta_max),
            ),
            dl300_sigma=num("DL300_SIGMA", d.dl300_sigma),
            cl_sigma=num("CL_SIGMA", d.cl_sigma),
            cl_falloff=num("CL_FALLOFF", d.cl_falloff),
            profile_overrides={k.lower(): v for k, v in env.with_prefix(PROFILE_PREFIX).items()},
        )
