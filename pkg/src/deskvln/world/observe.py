"""
Ego-centric observations: a fan of depth rays plus noisy semantic scores for the
labeled cells in view.
"""
import math
from dataclasses import dataclass

import numpy as np

from deskvln.embodiment.pose import PoseState, normalize_angle
from deskvln.embodiment.profile import RobotProfile
from deskvln.utils.seeding import as_generator
from deskvln.utils.typehints import LabelId, Meters, Radians, Seed
from deskvln.world.gridmap import GridMap
from deskvln.world.lighting import LightingCondition
from deskvln.world.raycast import ray_cast


@dataclass(frozen=True)
class ObservationConfig:
    fov_deg: float = 90.0
    rays: int = 64
    max_range: Meters = 10.0
    height_sensitivity: float = 0.3
    reference_height: Meters = 1.2

    @property
    def fov(self) -> Radians:
        return math.radians(self.fov_deg)

    def bearings(self) -> np.ndarray:
        """Ray bearings relative to the heading, right (negative) to left (positive)."""
        if self.rays == 1:
            return np.zeros(1)
        half = self.fov / 2
        return np.linspace(-half, half, self.rays)


@dataclass(frozen=True)
class VisibleLabel:
    label_id: LabelId
    name: str
    bearing: Radians
    distance: Meters
    score: float


@dataclass(frozen=True, eq=False)
class Observation:
    depth_rays: np.ndarray
    ray_bearings: np.ndarray
    visible_labels: tuple[VisibleLabel, ...]
    camera_height: Meters
    lighting: LightingCondition
    fov: Radians
    max_range: Meters

    def visible_names(self) -> list[str]:
        return [v.name for v in self.visible_labels]


def visibility_score(distance: Meters, camera_height: Meters, config: ObservationConfig) -> float:
    """Noiseless score of a label: fades with distance and with camera height off 1.2 m."""
    falloff = max(0.0, 1.0 - distance / config.max_range)
    h_ref = config.reference_height
    return falloff * math.exp(-config.height_sensitivity * abs(camera_height - h_ref) / h_ref)


def observe(
    grid: GridMap,
    pose: PoseState,
    profile: RobotProfile,
    lighting: LightingCondition,
    rng_seed: Seed = None,
    config: ObservationConfig = ObservationConfig(),
) -> Observation:
    """
    Render one observation.

    Depth is independent of lighting. A labeled cell is in view when its center lies inside
    the field of view, within max_range and in line of sight. Its score is the noiseless
    visibility score minus sigma_eff * N(0, 1), clipped to [0, 1]; one normal is drawn
    per in-view cell in row-major order. Cells whose score ends up at 0 go undetected.

    Raises:
        OutOfBounds: pose is outside the map
        BlockedCell: pose is inside an obstacle
    """
    origin = pose.position
    bearings = config.bearings()
    depth = np.array([ray_cast(grid, origin, pose.heading + b, config.max_range) for b in bearings])

    half = config.fov / 2
    in_view = []
    for label_id, row, col in grid.landmarks():
        cx, cy = grid.cell_center(row, col)
        d = math.hypot(cx - pose.x, cy - pose.y)
        if d > config.max_range:
            continue
        bearing = normalize_angle(math.atan2(cy - pose.y, cx - pose.x) - pose.heading) if d else 0.0
        if abs(bearing) > half:
            continue
        if d and ray_cast(grid, origin, pose.heading + bearing, d) < d:
            continue
        in_view.append((label_id, bearing, d))

    rng = as_generator(rng_seed)
    noise = rng.normal(size=len(in_view))
    visible = []
    for (label_id, bearing, d), n in zip(in_view, noise):
        true_score = visibility_score(d, profile.camera_height, config)
        sigma = lighting.effective_sigma(bearing, config.fov)
        score = min(max(true_score - sigma * float(n), 0.0), 1.0)
        if score > 0.0:
            visible.append(VisibleLabel(label_id, grid.label_name(label_id), bearing, d, score))

    return Observation(
        depth_rays=depth,
        ray_bearings=bearings,
        visible_labels=tuple(visible),
        camera_height=profile.camera_height,
        lighting=lighting,
        fov=config.fov,
        max_range=config.max_range,
    )
