import numpy as np

from deskvln.errors import ShapeMismatch
from deskvln.utils.typehints import Cell
from deskvln.world.gridmap import GridMap


def frontier_mask(explored: np.ndarray, grid: GridMap) -> np.ndarray:
    """Explored Free cells with at least one unexplored 4-neighbor."""
    explored = np.asarray(explored, dtype=bool)
    if explored.shape != grid.cells.shape:
        raise ShapeMismatch(f"explored mask {explored.shape} vs map {grid.cells.shape}")
    unexplored = ~explored
    touches = np.zeros_like(explored)
    touches[1:, :] |= unexplored[:-1, :]
    touches[:-1, :] |= unexplored[1:, :]
    touches[:, 1:] |= unexplored[:, :-1]
    touches[:, :-1] |= unexplored[:, 1:]
    return explored & grid.free_mask() & touches


def detect_frontiers(explored: np.ndarray, grid: GridMap) -> list[Cell]:
    """Frontier cells in row-major order."""
    return [(int(r), int(c)) for r, c in np.argwhere(frontier_mask(explored, grid))]
