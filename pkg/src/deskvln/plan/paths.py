import math

from deskvln.plan.astar import astar
from deskvln.plan.costgrid import CostGrid
from deskvln.utils.typehints import Cell, Meters, Point
from deskvln.world.gridmap import GridMap


def cells_to_points(grid: GridMap, cells: list[Cell]) -> list[Point]:
    return [grid.cell_center(r, c) for r, c in cells]


def plan_path(grid: GridMap, start: Point, goal: Point, costs: CostGrid) -> list[Point]:
    """
    A* polyline from start to goal: the exact endpoints joined through the centers of
    the intermediate cells.

    Raises:
        OutOfBounds: an endpoint is off the map
        NoPath: no path exists under costs
    """
    cells = astar(costs, grid.world_to_cell(*start), grid.world_to_cell(*goal))
    inner = cells_to_points(grid, cells[1:-1])
    points = [tuple(start), *inner, tuple(goal)]
    return [p for i, p in enumerate(points) if i == 0 or p != points[i - 1]]


def polyline_length(points: list[Point]) -> Meters:
    return math.fsum(math.dist(a, b) for a, b in zip(points, points[1:]))


def resample_path(points: list[Point], spacing: Meters) -> list[Point]:
    """
    Waypoints every `spacing` meters along a polyline, excluding the first point and
    always including the last.
    """
    if len(points) < 2:
        return []
    out: list[Point] = []
    carried = 0.0
    for a, b in zip(points, points[1:]):
        seg = math.dist(a, b)
        if seg == 0.0:
            continue
        s = spacing - carried
        while s <= seg + 1e-12:
            t = min(s / seg, 1.0)
            out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
            s += spacing
        carried = seg - (s - spacing)
    last = tuple(points[-1])
    if not out or math.dist(out[-1], last) > 1e-9:
        out.append(last)
    return out
