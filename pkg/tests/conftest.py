import pytest

from deskvln.utils.assets import asset_path
from deskvln.world.gridmap import load_map, load_map_file

ROOM = """\
cellsize 1.0
label s sofa
label t table
##########
#........#
#.s....t.#
#........#
#...H....#
#........#
##########
"""

# two rooms joined by a one-cell door at row 3, column 5
TWO_ROOMS = """\
cellsize 0.5
label b bed
label f fridge
###########
#....#....#
#.b..#....#
#.........#
#....#..f.#
#....#....#
###########
"""


@pytest.fixture
def room():
    return load_map(ROOM, scene_id="room")


@pytest.fixture
def two_rooms():
    return load_map(TWO_ROOMS, scene_id="two_rooms")


@pytest.fixture(scope="session")
def demo():
    return load_map_file(asset_path("demo.map"))


@pytest.fixture
def room_file(tmp_path):
    path = tmp_path / "room.map"
    path.write_text(ROOM, encoding="utf-8")
    return path
