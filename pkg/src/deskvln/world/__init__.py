"""
Grid worlds, lighting regimes and the observation model.
"""

from deskvln.world.gridmap import (
    CellKind,
    GridMap,
    dump_map,
    load_map,
    load_map_file,
    map_rows,
    validate_map,
)
from deskvln.world.raycast import line_of_sight, ray_cast
from deskvln.world.lighting import LightingCondition, LightingKind, make_lighting
from deskvln.world.observe import (
    Observation,
    ObservationConfig,
    VisibleLabel,
    observe,
    visibility_score,
)
from deskvln.world.procgen import ROOM_FURNITURE, make_room_map
