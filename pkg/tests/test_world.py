import math

import numpy as np
import pytest

from deskvln.embodiment.pose import PoseState
from deskvln.embodiment.profile import default_profile
from deskvln.errors import BlockedCell, OutOfBounds, ParseError, ValidationError
from deskvln.world import (
    CellKind,
    LightingCondition,
    LightingKind,
    ObservationConfig,
    dump_map,
    line_of_sight,
    load_map,
    make_lighting,
    make_room_map,
    observe,
    ray_cast,
    visibility_score,
)


def test_load_map_parses_cells_and_labels(room):
    assert (room.height, room.width) == (7, 10)
    assert room.cell_size == 1.0
    assert room.kind(4, 4) is CellKind.HOLE
    assert room.kind(0, 3) is CellKind.OBSTACLE
    assert room.label_name(int(room.labels[2, 2])) == "sofa"
    assert room.label_name(int(room.labels[2, 7])) == "table"
    assert room.vocabulary == ("sofa", "table")
    assert [(r, c) for _, r, c in room.landmarks()] == [(2, 2), (2, 7)]
    # labeled cells are Free
    assert room.kind(2, 2) is CellKind.FREE


def test_dump_map_reproduces_map(room):
    again = load_map(dump_map(room), scene_id="room")
    assert np.array_equal(again.cells, room.cells)
    assert np.array_equal(again.labels, room.labels)
    assert again.names == room.names


@pytest.mark.parametrize(
    "text, error",
    [
        ("", ParseError),
        ("#####\n#...#\n#####\n", ParseError),  # no cellsize header
        ("cellsize abc\n###\n#.#\n###\n", ParseError),
        ("cellsize 1\n####\n#..#\n###\n", ParseError),  # ragged
        ("cellsize 1\n###\n#?#\n###\n", ParseError),
        ("cellsize 1\nlabel . dot\n###\n#.#\n###\n", ParseError),
        ("cellsize 1\n###\n#..\n###\n", ValidationError),  # open border
        ("cellsize 0\n###\n#.#\n###\n", ValidationError),
    ],
)
def test_load_map_rejects_bad_text(text, error):
    with pytest.raises(error):
        load_map(text)


def test_world_to_cell_and_bounds(room):
    assert room.world_to_cell(1.5, 2.5) == (2, 1)
    assert room.cell_center(2, 1) == (1.5, 2.5)
    with pytest.raises(OutOfBounds):
        room.world_to_cell(10.5, 1.0)
    with pytest.raises(OutOfBounds):
        room.world_to_cell(-0.1, 1.0)


def test_ray_cast_hits_wall_boundary(room):
    assert ray_cast(room, (1.5, 1.5), 0.0, 20.0) == pytest.approx(7.5)
    assert ray_cast(room, (1.5, 1.5), math.pi / 2, 20.0) == pytest.approx(4.5)
    assert ray_cast(room, (1.5, 1.5), math.pi, 20.0) == pytest.approx(0.5)


def test_ray_cast_clamps_to_max_range(room):
    assert ray_cast(room, (1.5, 1.5), 0.0, 3.0) == 3.0


def test_ray_cast_passes_over_holes(room):
    # column 4 has a Hole at row 4; only the bottom wall stops the ray
    assert ray_cast(room, (4.5, 1.5), math.pi / 2, 20.0) == pytest.approx(4.5)


def test_ray_cast_from_obstacle_raises(room):
    with pytest.raises(BlockedCell):
        ray_cast(room, (0.5, 0.5), 0.0, 5.0)


def test_line_of_sight(two_rooms):
    assert line_of_sight(two_rooms, (0.75, 0.75), (2.25, 0.75))
    # the wall at column 5 separates the two upper corners
    assert not line_of_sight(two_rooms, (0.75, 0.75), (4.75, 0.75))
    assert line_of_sight(two_rooms, (1.0, 1.0), (1.0, 1.0))


def test_lighting_regimes():
    assert make_lighting("DL5000").semantic_noise_sigma == 0.0
    assert make_lighting("DL300", dl300_sigma=0.4).semantic_noise_sigma == 0.4
    with pytest.raises(ValidationError):
        LightingCondition(LightingKind.DL5000, 0.1)
    with pytest.raises(ValidationError):
        LightingCondition(LightingKind.DL300, 0.3, angular_falloff=0.5)
    with pytest.raises(ValueError):
        make_lighting("moonlight")


def test_camera_light_degrades_toward_edges():
    cl = make_lighting("CL", cl_sigma=0.2, cl_falloff=1.0)
    fov = math.radians(90)
    assert cl.effective_sigma(0.0, fov) == pytest.approx(0.2)
    assert cl.effective_sigma(fov / 2, fov) == pytest.approx(0.3)
    dl = make_lighting("DL300")
    assert dl.effective_sigma(fov / 2, fov) == dl.effective_sigma(0.0, fov)


def test_visibility_score_falls_with_distance_and_height():
    config = ObservationConfig()
    assert visibility_score(0.0, 1.2, config) == pytest.approx(1.0)
    assert visibility_score(config.max_range, 1.2, config) == 0.0
    assert visibility_score(2.0, 0.3, config) < visibility_score(2.0, 1.2, config)
    assert visibility_score(2.0, 1.8, config) < visibility_score(2.0, 1.2, config)


def test_observe_depth_ignores_lighting(room):
    pose = PoseState(1.5, 2.5, 0.0)
    profile = default_profile("flash")
    bright = observe(room, pose, profile, make_lighting("DL5000"), rng_seed=1)
    dim = observe(room, pose, profile, make_lighting("DL300"), rng_seed=1)
    assert np.array_equal(bright.depth_rays, dim.depth_rays)
    assert len(bright.depth_rays) == ObservationConfig().rays
    assert np.all((bright.depth_rays > 0) & (bright.depth_rays <= 10.0))


def test_observe_daylight_scores_are_noiseless(room):
    pose = PoseState(1.5, 2.5, 0.0)
    profile = default_profile("flash")
    obs = observe(room, pose, profile, make_lighting("DL5000"), rng_seed=3)
    assert obs.visible_names() == ["sofa", "table"]
    table = obs.visible_labels[1]
    assert table.distance == pytest.approx(6.0)
    assert table.bearing == pytest.approx(0.0)
    assert table.score == pytest.approx(visibility_score(6.0, 1.2, ObservationConfig()))


def test_observe_noisy_scores_stay_in_unit_range(room):
    profile = default_profile("humanoid")
    lighting = make_lighting("DL300", dl300_sigma=2.0)
    for seed in range(20):
        obs = observe(room, PoseState(4.5, 3.5, math.pi / 4 * seed), profile, lighting, seed)
        assert all(0.0 < v.score <= 1.0 for v in obs.visible_labels)


def test_observe_is_deterministic_per_seed(room):
    profile = default_profile("quadruped")
    lighting = make_lighting("CL")
    a = observe(room, PoseState(4.5, 3.5, 0.3), profile, lighting, rng_seed=11)
    b = observe(room, PoseState(4.5, 3.5, 0.3), profile, lighting, rng_seed=11)
    assert a.visible_labels == b.visible_labels


def test_procedural_maps_are_closed_and_seeded():
    a = make_room_map(rng_seed=4, width=60, height=50)
    b = make_room_map(rng_seed=4, width=60, height=50)
    assert np.array_equal(a.cells, b.cells)
    assert np.array_equal(a.labels, b.labels)
    assert np.all(a.cells[0] == CellKind.OBSTACLE)
    assert np.all(a.cells[(a.labels > 0)] == CellKind.FREE)

