"""
Attitude disturbance: an AR(1) process on roll and pitch, kicked by collisions and holes.
"""
from deskvln.embodiment.pose import PoseState
from deskvln.embodiment.profile import RobotProfile
from deskvln.errors import AlreadyFallen
from deskvln.utils.seeding import as_generator
from deskvln.utils.typehints import Seed

AR_COEFFICIENT = 0.9


def apply_disturbance(
    pose: PoseState,
    profile: RobotProfile,
    commanded_speed: float,
    collided: bool,
    on_hole: bool,
    rng_seed: Seed = None,
    rho: float = AR_COEFFICIENT,
) -> PoseState:
    """
    One AR(1) update of roll and pitch.

    roll' = rho*roll + N(0, sigma*(1 + |v|)) + collided*collision_impulse + on_hole*hole_impulse,
    and likewise for pitch. Two normals are always drawn, so the rng stream does not
    depend on the profile. Position is untouched.

    Raises:
        AlreadyFallen: pose.fallen is set
    """
    if pose.fallen:
        raise AlreadyFallen("cannot disturb a fallen robot")
    rng = as_generator(rng_seed)
    std = profile.disturbance_sigma * (1.0 + abs(commanded_speed))
    noise = rng.normal(size=2) * std
    kick = collided * profile.collision_impulse + on_hole * profile.hole_impulse
    return pose.moved(
        roll=rho * pose.roll + float(noise[0]) + kick,
        pitch=rho * pose.pitch + float(noise[1]) + kick,
    )
