"""
Procedural room maps: a closed world split into rooms by recursive division, with a
door in every dividing wall, furniture labels along the walls and a few floor holes.
"""
import logging
import math

import numpy as np
from scipy import ndimage

from deskvln.utils.seeding import as_generator
from deskvln.utils.typehints import Meters, Seed
from deskvln.world.gridmap import CellKind, GridMap

logger = logging.getLogger(__name__)

ROOM_FURNITURE = {
    "living room": ("sofa", "tv", "armchair"),
    "dining room": ("table", "chair"),
    "bedroom": ("bed", "wardrobe"),
    "kitchen": ("fridge", "oven"),
    "toilet": ("toilet", "bathtub"),
}

LABEL_CHARS = "abcdefgijklmnopqrstuvwxyz"


def _divide(cells, rng, r0, r1, c0, c1, min_cells, door_cells, rooms, doors):
    """Split the interior region [r0, r1) x [c0, c1) until rooms are small."""
    rows, cols = r1 - r0, c1 - c0
    can_split_rows = rows >= 2 * min_cells + 1
    can_split_cols = cols >= 2 * min_cells + 1
    if not (can_split_rows or can_split_cols):
        rooms.append((r0, r1, c0, c1))
        return
    split_rows = can_split_rows and (rows >= cols or not can_split_cols)
    if split_rows:
        wall = int(rng.integers(r0 + min_cells, r1 - min_cells))
        cells[wall, c0:c1] = CellKind.OBSTACLE
        width = min(door_cells, cols)
        start = int(rng.integers(c0, c1 - width + 1))
        cells[wall, start : start + width] = CellKind.FREE
        doors.extend((wall, c) for c in range(start, start + width))
        _divide(cells, rng, r0, wall, c0, c1, min_cells, door_cells, rooms, doors)
        _divide(cells, rng, wall + 1, r1, c0, c1, min_cells, door_cells, rooms, doors)
    else:
        wall = int(rng.integers(c0 + min_cells, c1 - min_cells))
        cells[r0:r1, wall] = CellKind.OBSTACLE
        width = min(door_cells, rows)
        start = int(rng.integers(r0, r1 - width + 1))
        cells[start : start + width, wall] = CellKind.FREE
        doors.extend((r, wall) for r in range(start, start + width))
        _divide(cells, rng, r0, r1, c0, wall, min_cells, door_cells, rooms, doors)
        _divide(cells, rng, r0, r1, wall + 1, c1, min_cells, door_cells, rooms, doors)


def make_room_map(
    rng_seed: Seed = None,
    width: int = 120,
    height: int = 120,
    cell_size: Meters = 0.1,
    min_room: Meters = 3.0,
    door_width: Meters = 1.0,
    furniture_per_room: int = 2,
    holes: int = 3,
    scene_id: str = "procgen",
) -> GridMap:
    """
    Generate a connected, closed room map.

    Args:
        rng_seed: Seed or Generator
        width, height: Map size in cells, border included
        cell_size: Meters per cell
        min_room: Smallest room side in meters
        door_width: Door opening in meters (at least 0.8)
        furniture_per_room: Labeled cells placed along the walls of each room
        holes: Number of Hole cells, kept away from doors and walls
        scene_id: Scene id of the result

    Returns:
        GridMap whose traversable cells form one 8-connected component
    """
    if width < 5 or height < 5:
        raise ValueError("procedural maps need at least 5x5 cells")
    rng = as_generator(rng_seed)
    door_cells = max(int(math.ceil(max(door_width, 0.8) / cell_size)), 1)
    min_cells = max(int(round(min_room / cell_size)), door_cells)

    cells = np.zeros((height, width), dtype=np.uint8)
    cells[0, :] = cells[-1, :] = cells[:, 0] = cells[:, -1] = CellKind.OBSTACLE
    rooms: list[tuple[int, int, int, int]] = []
    doors: list[tuple[int, int]] = []
    _divide(cells, rng, 1, height - 1, 1, width - 1, min_cells, door_cells, rooms, doors)

    # keep the largest 8-connected component; recursive division should already give one
    components, count = ndimage.label(cells != CellKind.OBSTACLE, structure=np.ones((3, 3)))
    if count > 1:
        sizes = np.bincount(components.ravel())
        sizes[0] = 0
        cells[(components != int(sizes.argmax())) & (components > 0)] = CellKind.OBSTACLE
        logger.debug("procgen closed %d disconnected pockets", count - 1)

    door_mask = np.zeros_like(cells, dtype=bool)
    for r, c in doors:
        door_mask[r, c] = True
    near_door = ndimage.binary_dilation(door_mask, iterations=max(door_cells, 2))
    near_wall = ndimage.binary_dilation(cells == CellKind.OBSTACLE, structure=np.ones((3, 3)))

    names = list(dict.fromkeys(n for items in ROOM_FURNITURE.values() for n in items))
    label_of = {name: i + 1 for i, name in enumerate(names)}
    labels = np.zeros_like(cells, dtype=np.int32)
    room_types = list(ROOM_FURNITURE)
    for r0, r1, c0, c1 in rooms:
        room = room_types[int(rng.integers(len(room_types)))]
        region = np.zeros_like(near_wall)
        region[r0:r1, c0:c1] = True
        usable = near_wall & ~near_door & (cells == CellKind.FREE) & (labels == 0)
        spots = np.argwhere(region & usable)
        if len(spots) == 0:
            continue
        items = ROOM_FURNITURE[room]
        picks = rng.choice(len(spots), size=min(furniture_per_room, len(spots)), replace=False)
        for i, pick in enumerate(picks):
            r, c = spots[pick]
            labels[r, c] = label_of[items[i % len(items)]]

    open_floor = (cells == CellKind.FREE) & ~near_door & ~near_wall & (labels == 0)
    spots = np.argwhere(open_floor)
    if holes and len(spots):
        for pick in rng.choice(len(spots), size=min(holes, len(spots)), replace=False):
            r, c = spots[pick]
            cells[r, c] = CellKind.HOLE

    return GridMap(
        cell_size=cell_size,
        cells=cells,
        labels=labels,
        legend=tuple(LABEL_CHARS[: len(names)]),
        names=tuple(names),
        scene_id=scene_id,
    )
