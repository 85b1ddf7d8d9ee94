"""
Grid ray casting (the depth sensor).
"""
import math

from deskvln.errors import BlockedCell
from deskvln.utils.typehints import Meters, Point, Radians
from deskvln.world.gridmap import CellKind, GridMap


def ray_cast(grid: GridMap, origin: Point, heading: Radians, max_range: Meters) -> Meters:
    """
    Distance from origin along heading to the boundary of the first Obstacle cell.

    Cells are visited in traversal order (Amanatides-Woo), so the result is exact up to
    floating point. Hole cells do not stop the ray.

    Args:
        grid: Map to cast in
        origin: (x, y) in meters, inside a non-obstacle cell
        heading: Ray direction, radians from +x toward +y
        max_range: Clamp for the returned distance

    Returns:
        Distance in meters, at most max_range

    Raises:
        OutOfBounds: origin lies outside the map
        BlockedCell: origin lies inside an Obstacle cell
    """
    x0, y0 = origin
    row, col = grid.world_to_cell(x0, y0)
    if grid.cells[row, col] == CellKind.OBSTACLE:
        raise BlockedCell(f"ray origin ({x0:.3f}, {y0:.3f}) is inside an obstacle")

    cs = grid.cell_size
    dx, dy = math.cos(heading), math.sin(heading)
    step_c = 1 if dx > 0 else -1
    step_r = 1 if dy > 0 else -1

    if dx > 0:
        t_next_x = ((col + 1) * cs - x0) / dx
    elif dx < 0:
        t_next_x = (col * cs - x0) / dx
    else:
        t_next_x = math.inf
    if dy > 0:
        t_next_y = ((row + 1) * cs - y0) / dy
    elif dy < 0:
        t_next_y = (row * cs - y0) / dy
    else:
        t_next_y = math.inf
    t_delta_x = cs / abs(dx) if dx else math.inf
    t_delta_y = cs / abs(dy) if dy else math.inf

    cells = grid.cells
    while True:
        if t_next_x < t_next_y:
            t = t_next_x
            col += step_c
            t_next_x += t_delta_x
        else:
            t = t_next_y
            row += step_r
            t_next_y += t_delta_y
        if t >= max_range:
            return max_range
        if not grid.in_bounds(row, col) or cells[row, col] == CellKind.OBSTACLE:
            return t


def line_of_sight(grid: GridMap, a: Point, b: Point) -> bool:
    """True when no Obstacle cell lies between a and b."""
    d = math.hypot(b[0] - a[0], b[1] - a[1])
    if d == 0.0:
        return True
    heading = math.atan2(b[1] - a[1], b[0] - a[0])
    return ray_cast(grid, a, heading, d) >= d
