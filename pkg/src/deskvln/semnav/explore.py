"""
Frontier-driven exploration toward a landmark that is not yet on the semantic map.
"""
import logging
import math
from collections.abc import Collection

from deskvln.embodiment.pose import PoseState
from deskvln.errors import NoFrontiers
from deskvln.plan.frontier import detect_frontiers
from deskvln.plan.geodesic import geodesic_field
from deskvln.semnav.affinity import AffinityTable
from deskvln.semnav.semantic_map import SemanticMap
from deskvln.utils.typehints import Cell, Meters
from deskvln.world.gridmap import GridMap
from deskvln.world.raycast import line_of_sight

logger = logging.getLogger(__name__)

PEEK_RANGE = 5.0


def peek_labels(grid: GridMap, cell: Cell, peek_range: Meters = PEEK_RANGE) -> list[str]:
    """Distinct label names in line of sight within peek_range of a cell center, sorted."""
    origin = grid.cell_center(*cell)
    seen = set()
    for label_id, row, col in grid.landmarks():
        name = grid.label_name(label_id)
        if name in seen:
            continue
        target = grid.cell_center(row, col)
        if math.dist(origin, target) <= peek_range and line_of_sight(grid, origin, target):
            seen.add(name)
    return sorted(seen)


def frontier_score(
    grid: GridMap,
    cell: Cell,
    next_landmark: str,
    table: AffinityTable,
    peek_range: Meters = PEEK_RANGE,
) -> float:
    """Mean affinity between the labels seen from a frontier and the landmark sought."""
    return table.mean_affinity(peek_labels(grid, cell, peek_range), next_landmark)


def explore_step(
    smap: SemanticMap,
    pose: PoseState,
    next_landmark: str,
    table: AffinityTable,
    grid: GridMap,
    visited: Collection[Cell] = (),
    peek_range: Meters = PEEK_RANGE,
) -> Cell:
    """
    Choose the next frontier to visit.

    Every reachable, unvisited frontier is scored with a simulated look-around from its
    center (frontier_score); the highest score wins, ties go to the geodesically
    nearest frontier, then to row-major order.

    Args:
        smap: Semantic map supplying the explored mask
        pose: Current pose
        next_landmark: Label (or room) being searched for
        table: Affinity table
        grid: World map used for reachability and the simulated look-around
        visited: Frontier cells already visited
        peek_range: Reach of the simulated look-around

    Raises:
        NoFrontiers: no reachable frontier is left
    """
    field = geodesic_field(grid).field_from(pose.position)
    visited = set(visited)
    candidates = [
        cell
        for cell in detect_frontiers(smap.explored, grid)
        if cell not in visited and math.isfinite(field[cell])
    ]
    if not candidates:
        raise NoFrontiers(f"no frontiers left while searching for {next_landmark!r}")
    scored = [
        (-frontier_score(grid, cell, next_landmark, table, peek_range), float(field[cell]), cell)
        for cell in candidates
    ]
    score, distance, best = min(scored)
    logger.debug(
        "frontier %s for %r: score %.3f at %.2fm (%d candidates)",
        best,
        next_landmark,
        -score,
        distance,
        len(candidates),
    )
    return best
