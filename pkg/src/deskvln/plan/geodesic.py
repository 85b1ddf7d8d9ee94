"""
Geodesic distances over the traversable cells of a map, via scipy's csgraph Dijkstra.
"""
import logging
import math
import weakref
from collections import OrderedDict

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from deskvln.errors import BlockedCell, Unreachable
from deskvln.plan.astar import NEIGHBORS
from deskvln.plan.costgrid import CostGrid, uniform_costs
from deskvln.utils.typehints import Cell, Meters, Point
from deskvln.world.gridmap import GridMap

logger = logging.getLogger(__name__)

FIELD_CACHE_SIZE = 64


def _window(a: np.ndarray, dr: int, dc: int, sr: slice, sc: slice) -> np.ndarray:
    return a[sr.start + dr : sr.stop + dr, sc.start + dc : sc.stop + dc]


def build_graph(costs: CostGrid) -> csr_matrix:
    """
    Directed sparse graph over cells (row-major ids) with the A* edge rule: moving
    into a cell costs step_length * cost(cell), diagonals may not cut blocked corners.
    """
    grid = costs.costs
    height, width = grid.shape
    ok = np.isfinite(grid)
    ids = np.arange(height * width).reshape(height, width)
    rows, cols, weights = [], [], []
    for dr, dc, step in NEIGHBORS:
        sr = slice(max(0, -dr), height - max(0, dr))
        sc = slice(max(0, -dc), width - max(0, dc))
        valid = ok[sr, sc] & _window(ok, dr, dc, sr, sc)
        if dr and dc:
            valid &= _window(ok, dr, 0, sr, sc) & _window(ok, 0, dc, sr, sc)
        rows.append(ids[sr, sc][valid])
        cols.append(_window(ids, dr, dc, sr, sc)[valid])
        weights.append(step * _window(grid, dr, dc, sr, sc)[valid])
    n = height * width
    return csr_matrix(
        (np.concatenate(weights), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )


def distance_field(costs: CostGrid, source: Cell, to_source: bool = False) -> np.ndarray:
    """
    Path costs (in cells) from source to every cell, or from every cell to source when
    to_source is set. Unreachable cells are inf.
    """
    graph = build_graph(costs)
    if to_source:
        graph = graph.T.tocsr()
    width = costs.shape[1]
    dist = dijkstra(graph, directed=True, indices=source[0] * width + source[1])
    return dist.reshape(costs.shape)


class GeodesicField:
    """
    Uniform-cost geodesic distances on one map, in meters.

    Single-source fields are cached (most recent FIELD_CACHE_SIZE sources).
    """

    def __init__(self, grid: GridMap):
        self.grid = grid
        self.costs = uniform_costs(grid)
        self.graph = build_graph(self.costs)
        self._fields: OrderedDict[Cell, np.ndarray] = OrderedDict()

    def _cell(self, point: Point) -> Cell:
        row, col = self.grid.world_to_cell(*point)
        if self.costs.blocked((row, col)):
            raise BlockedCell(f"point ({point[0]:.3f}, {point[1]:.3f}) is inside an obstacle")
        return row, col

    def field_from_cell(self, cell: Cell) -> np.ndarray:
        """(height, width) array of geodesic meters from cell; inf where unreachable."""
        cell = (int(cell[0]), int(cell[1]))
        field = self._fields.get(cell)
        if field is None:
            dist = dijkstra(self.graph, directed=True, indices=cell[0] * self.grid.width + cell[1])
            field = dist.reshape(self.grid.cells.shape) * self.grid.cell_size
            field.setflags(write=False)
            self._fields[cell] = field
            if len(self._fields) > FIELD_CACHE_SIZE:
                self._fields.popitem(last=False)
        else:
            self._fields.move_to_end(cell)
        return field

    def field_from(self, point: Point) -> np.ndarray:
        return self.field_from_cell(self._cell(point))

    def distance(self, a: Point, b: Point) -> Meters:
        """
        Raises:
            OutOfBounds: a point is off the map
            BlockedCell: a point is inside an obstacle
            Unreachable: the points are not connected
        """
        field = self.field_from(a)
        d = float(field[self._cell(b)])
        if not math.isfinite(d):
            ends = f"({a[0]:.2f}, {a[1]:.2f}) and ({b[0]:.2f}, {b[1]:.2f})"
            raise Unreachable(f"{ends} are not connected")
        return d


_FIELDS: "weakref.WeakKeyDictionary[GridMap, GeodesicField]" = weakref.WeakKeyDictionary()


def geodesic_field(grid: GridMap) -> GeodesicField:
    """The shared GeodesicField of a map (built on first use)."""
    field = _FIELDS.get(grid)
    if field is None:
        logger.debug("building geodesic graph for scene %s", grid.scene_id)
        field = _FIELDS[grid] = GeodesicField(grid)
    return field


def geodesic_distance(grid: GridMap, a: Point, b: Point) -> Meters:
    """8-connected shortest traversable path length between two points, in meters."""
    return geodesic_field(grid).distance(a, b)
