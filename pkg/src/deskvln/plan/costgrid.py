"""
Traversal cost grids: base cost 1, a penalty near obstacles (dilation) and on
unexplored cells, and infinity for blocked cells.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from deskvln.errors import ShapeMismatch, ValidationError
from deskvln.utils.typehints import Cell, Meters
from deskvln.world.gridmap import GridMap

BASE_COST = 1.0
BLOCKED = math.inf


@dataclass(frozen=True)
class PlannerConfig:
    dilation_radius: Meters = 0.3
    dilated_cost: float = 3.0
    unexplored_cost: float = 2.0

    def __post_init__(self):
        if self.dilation_radius < 0:
            raise ValidationError("dilation radius must be >= 0")
        if self.dilated_cost < 1 or self.unexplored_cost < 1:
            raise ValidationError("penalty costs must be >= 1")


@dataclass(frozen=True, eq=False)
class CostGrid:
    """Per-cell cost of entering a cell; inf marks blocked cells."""

    costs: np.ndarray
    cell_size: Meters

    def __post_init__(self):
        costs = np.array(self.costs, dtype=float)
        costs.setflags(write=False)
        object.__setattr__(self, "costs", costs)

    @property
    def shape(self) -> tuple[int, int]:
        return self.costs.shape

    def blocked(self, cell: Cell) -> bool:
        r, c = cell
        if not (0 <= r < self.shape[0] and 0 <= c < self.shape[1]):
            return True
        return not math.isfinite(self.costs[r, c])

    def with_unexplored(self, explored: np.ndarray, unexplored_cost: float) -> "CostGrid":
        """Raise unexplored, unblocked cells to at least unexplored_cost."""
        if explored.shape != self.shape:
            raise ShapeMismatch(f"explored mask {explored.shape} vs cost grid {self.shape}")
        costs = self.costs.copy()
        penalize = ~explored & np.isfinite(costs)
        costs[penalize] = np.maximum(costs[penalize], unexplored_cost)
        return CostGrid(costs, self.cell_size)


def dilation_structure(radius: Meters, cell_size: Meters) -> np.ndarray:
    """
    Offsets whose cell square comes within radius of a cell center.

    radius == cell_size selects exactly the 3x3 neighborhood.
    """
    reach = int(math.ceil(radius / cell_size))
    offsets = np.arange(-reach, reach + 1)
    di, dj = np.meshgrid(offsets, offsets, indexing="ij")
    gap_r = np.maximum(np.abs(di) - 0.5, 0.0) * cell_size
    gap_c = np.maximum(np.abs(dj) - 0.5, 0.0) * cell_size
    return np.hypot(gap_r, gap_c) <= radius


def dilation_mask(obstacles: np.ndarray, radius: Meters, cell_size: Meters) -> np.ndarray:
    """Non-obstacle cells within radius of an obstacle cell."""
    if radius <= 0:
        return np.zeros_like(obstacles, dtype=bool)
    structure = dilation_structure(radius, cell_size)
    return ndimage.binary_dilation(obstacles, structure=structure) & ~obstacles


def dilate(grid: GridMap, radius: Meters, dilated_cost: float = 3.0) -> CostGrid:
    """
    Cost grid with Obstacle cells blocked, cells within radius of an obstacle at
    dilated_cost and everything else at the base cost.
    """
    if radius < 0:
        raise ValidationError("dilation radius must be >= 0")
    obstacles = grid.obstacle_mask()
    costs = np.full(obstacles.shape, BASE_COST)
    costs[dilation_mask(obstacles, radius, grid.cell_size)] = dilated_cost
    costs[obstacles] = BLOCKED
    return CostGrid(costs, grid.cell_size)


def plan_costs(
    grid: GridMap, config: PlannerConfig = PlannerConfig(), explored: np.ndarray | None = None
) -> CostGrid:
    """Dilated cost grid, with the unexplored penalty when an explored mask is given."""
    costs = dilate(grid, config.dilation_radius, config.dilated_cost)
    if explored is not None:
        costs = costs.with_unexplored(explored, config.unexplored_cost)
    return costs


def uniform_costs(grid: GridMap) -> CostGrid:
    """Base cost everywhere except Obstacle cells."""
    costs = np.where(grid.obstacle_mask(), BLOCKED, BASE_COST)
    return CostGrid(costs, grid.cell_size)
