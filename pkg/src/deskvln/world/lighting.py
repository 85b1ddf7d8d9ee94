"""
Lighting regimes as a perceptual-noise model.

Only the semantic channel degrades under lighting; depth never does.
"""
import math
from dataclasses import dataclass
from enum import Enum

from deskvln.errors import ValidationError
from deskvln.utils.typehints import Radians


class LightingKind(str, Enum):
    DL5000 = "DL5000"  # daylight, intensity 5000
    DL300 = "DL300"  # dim light, intensity 300
    CL = "CL"  # camera light: bright at the center of the view, darker toward the edges


@dataclass(frozen=True)
class LightingCondition:
    kind: LightingKind
    semantic_noise_sigma: float = 0.0
    angular_falloff: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", LightingKind(self.kind))
        if not (self.semantic_noise_sigma >= 0 and math.isfinite(self.semantic_noise_sigma)):
            raise ValidationError(f"noise sigma must be >= 0, got {self.semantic_noise_sigma}")
        if not 0.0 <= self.angular_falloff <= 1.0:
            raise ValidationError(f"angular falloff must be in [0, 1], got {self.angular_falloff}")
        if self.kind is LightingKind.DL5000 and self.semantic_noise_sigma != 0:
            raise ValidationError("DL5000 lighting is noiseless")
        if self.kind is not LightingKind.CL and self.angular_falloff != 0:
            raise ValidationError("angular falloff applies to CL lighting only")

    def effective_sigma(self, bearing: Radians, fov: Radians) -> float:
        """Noise std for a label seen at bearing (radians off the optical axis)."""
        if self.kind is LightingKind.CL:
            return self.semantic_noise_sigma * (1.0 + self.angular_falloff * abs(bearing) / fov)
        return self.semantic_noise_sigma


def make_lighting(
    kind: str | LightingKind,
    dl300_sigma: float = 0.3,
    cl_sigma: float = 0.15,
    cl_falloff: float = 1.0,
) -> LightingCondition:
    """Build a LightingCondition with the configured noise for its regime."""
    kind = LightingKind(kind)
    if kind is LightingKind.DL300:
        return LightingCondition(kind, dl300_sigma)
    if kind is LightingKind.CL:
        return LightingCondition(kind, cl_sigma, cl_falloff)
    return LightingCondition(kind)
