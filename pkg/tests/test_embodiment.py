import math

import numpy as np
import pytest

from deskvln.embodiment import (
    DEFAULT_PROFILES,
    PoseState,
    ProfileKind,
    RobotProfile,
    StuckWindow,
    apply_disturbance,
    check_fall,
    check_stuck,
    default_profile,
    heading_span,
    normalize_angle,
    profile_from_config,
    profile_to_config,
)
from deskvln.errors import AlreadyFallen, ValidationError

EPS = 1e-9


def test_normalize_angle_keeps_pi():
    assert normalize_angle(-math.pi) == math.pi
    assert normalize_angle(math.tau + 0.5) == pytest.approx(0.5)
    assert PoseState(0, 0, -math.pi).heading == math.pi


def test_fallen_is_sticky():
    pose = PoseState(1.0, 1.0, fallen=True)
    assert pose.moved(x=2.0, fallen=False).fallen


def test_camera_heights_order_the_embodiments():
    heights = {k: p.camera_height for k, p in DEFAULT_PROFILES.items()}
    assert heights[ProfileKind.HUMANOID] > heights[ProfileKind.QUADRUPED]
    assert heights[ProfileKind.QUADRUPED] > heights[ProfileKind.WHEELED]
    assert default_profile("flash").camera_height == 1.2


def test_flash_profile_has_no_disturbance():
    with pytest.raises(ValidationError):
        RobotProfile(ProfileKind.FLASH, 1.2, disturbance_sigma=0.1)
    with pytest.raises(ValidationError):
        RobotProfile(ProfileKind.WHEELED, 0.0)


def test_profile_config_block_round_trip():
    humanoid = default_profile("humanoid")
    block = profile_to_config(humanoid)
    assert block["kind"] == "humanoid"
    assert profile_from_config(block) == humanoid


def test_profile_overrides():
    base = default_profile("quadruped")
    tall = profile_from_config({"Camera_Height": "0.8"}, base)
    assert tall.camera_height == 0.8
    assert tall.hole_impulse == base.hole_impulse
    with pytest.raises(ValidationError):
        profile_from_config({"wings": "2"}, base)
    with pytest.raises(ValidationError):
        profile_from_config({"camera_height": "tall"}, base)
    with pytest.raises(ValidationError):
        profile_from_config({"camera_height": "1.0"})


@pytest.mark.parametrize(
    "roll_deg, pitch_deg, fallen",
    [
        (15.0, 0.0, False),
        (15.0 + EPS, 0.0, True),
        (-15.0 - EPS, 0.0, True),
        (0.0, 35.0, False),
        (0.0, 35.0 + EPS, True),
        (0.0, -35.0, False),
    ],
)
def test_fall_thresholds(roll_deg, pitch_deg, fallen):
    pose = PoseState(0, 0, roll=math.radians(roll_deg), pitch=math.radians(pitch_deg))
    assert check_fall(pose, default_profile("humanoid")) is fallen


def _window(poses):
    window = StuckWindow()
    for pose in poses:
        window.push(pose)
    return window


def test_stuck_needs_a_full_window():
    still = [PoseState(1.0, 1.0)] * 49
    assert not check_stuck(_window(still))
    assert check_stuck(_window(still + [PoseState(1.0, 1.0)]))


@pytest.mark.parametrize(
    "dx, turn_deg, stuck",
    [
        (0.2 - EPS, 0.0, True),
        (0.2, 0.0, False),
        (0.0, 15.0 - EPS, True),
        (0.0, 15.0, False),
    ],
)
def test_stuck_boundaries(dx, turn_deg, stuck):
    poses = [PoseState(0.0, 0.0, 0.0)] * 49 + [PoseState(dx, 0.0, math.radians(turn_deg))]
    assert check_stuck(_window(poses)) is stuck


def test_heading_span_wraps_around_pi():
    assert heading_span([math.pi - 0.1, -math.pi + 0.1]) == pytest.approx(0.2)
    assert heading_span([0.0]) == 0.0


def test_disturbance_is_ar1_with_kicks():
    profile = default_profile("humanoid")
    pose = PoseState(0, 0, roll=0.1, pitch=-0.1)
    calm = RobotProfile(ProfileKind.HUMANOID, 1.8, collision_impulse=0.2, hole_impulse=0.3)
    out = apply_disturbance(pose, calm, 1.0, collided=True, on_hole=False, rng_seed=0)
    assert out.roll == pytest.approx(0.9 * 0.1 + 0.2)
    assert out.pitch == pytest.approx(0.9 * -0.1 + 0.2)
    assert (out.x, out.y) == (pose.x, pose.y)
    a = apply_disturbance(pose, profile, 0.5, False, True, rng_seed=7)
    b = apply_disturbance(pose, profile, 0.5, False, True, rng_seed=7)
    assert a == b


def test_disturbing_a_fallen_robot_raises():
    with pytest.raises(AlreadyFallen):
        apply_disturbance(PoseState(0, 0, fallen=True), default_profile("wheeled"), 0, False, False)


def test_collisions_shift_the_attitude_mean():
    profile = default_profile("humanoid")
    pose = PoseState(0, 0, roll=0.1, pitch=-0.1)
    rng = np.random.default_rng(11)
    calm = [apply_disturbance(pose, profile, 0.5, False, False, rng) for _ in range(10_000)]
    hit = [apply_disturbance(pose, profile, 0.5, True, False, rng) for _ in range(10_000)]
    calm_roll = np.mean([p.roll for p in calm])
    hit_roll = np.mean([p.roll for p in hit])
    assert calm_roll == pytest.approx(0.09, abs=1e-3)
    assert hit_roll - calm_roll == pytest.approx(profile.collision_impulse, abs=1e-3)
    hit_pitch = np.mean([p.pitch for p in hit])
    assert hit_pitch == pytest.approx(-0.09 + profile.collision_impulse, abs=1e-3)


def test_stuck_ignores_rigid_motion():
    rng = np.random.default_rng(12)
    for _ in range(200):
        spread, turn = rng.uniform(0.05, 0.35), rng.uniform(0.0, 0.5)
        points = rng.uniform(0.0, spread, (50, 2))
        headings = rng.uniform(-turn, turn, 50) / 2 + rng.uniform(-math.pi, math.pi)
        angle, shift = rng.uniform(-math.pi, math.pi), rng.uniform(-20.0, 20.0, 2)
        c, s = math.cos(angle), math.sin(angle)
        moved = points @ np.array([[c, s], [-s, c]]) + shift
        before = [PoseState(x, y, h) for (x, y), h in zip(points, headings)]
        after = [PoseState(x, y, h + angle) for (x, y), h in zip(moved, headings)]
        assert check_stuck(_window(before)) is check_stuck(_window(after))


def test_fall_is_monotone_in_attitude():
    profile = default_profile("quadruped")
    rng = np.random.default_rng(13)
    for roll, pitch in rng.uniform(-1.0, 1.0, (1000, 2)):
        grow = rng.uniform(1.0, 3.0)
        if check_fall(PoseState(0, 0, roll=roll, pitch=pitch), profile):
            assert check_fall(PoseState(0, 0, roll=roll * grow, pitch=pitch * grow), profile)
        smaller = PoseState(0, 0, roll=roll / grow, pitch=pitch / grow)
        if not check_fall(PoseState(0, 0, roll=roll, pitch=pitch), profile):
            assert not check_fall(smaller, profile)
