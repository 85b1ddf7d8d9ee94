"""
Reorientation-node selection.

Before moving forward by some distance, the agent picks a nearby node n that keeps
|dist(n, x0) - dist(xg, x0)| small without turning much:

    n* = argmin |dist(n, x0) - dist(xg, x0)| + alpha * gamma(n)

with gamma the unsigned turn angle needed to face n and alpha = 0.25.
"""
import math
from dataclasses import dataclass

from deskvln.embodiment.pose import PoseState, normalize_angle
from deskvln.errors import EmptyCandidates, ValidationError
from deskvln.plan.costgrid import BASE_COST, CostGrid
from deskvln.utils.typehints import Cell, Meters, Point, Radians
from deskvln.world.gridmap import GridMap
from deskvln.world.raycast import line_of_sight

REORIENT_ALPHA = 0.25
CANDIDATE_MARGIN = 0.5


@dataclass(frozen=True)
class ReorientCandidate:
    cell: Cell
    point: Point
    gamma: Radians

    def __post_init__(self):
        if not 0.0 <= self.gamma <= math.pi:
            raise ValidationError(f"turn angle must be in [0, pi], got {self.gamma}")


def reorient_cost(
    candidate: ReorientCandidate, x0: Point, target_dist: Meters, alpha: float
) -> float:
    return abs(math.dist(candidate.point, x0) - target_dist) + alpha * candidate.gamma


def select_reorient_node(
    candidates: list[ReorientCandidate],
    x0: Point,
    xg: Point,
    target_dist: Meters | None = None,
    alpha_weight: float = REORIENT_ALPHA,
) -> Cell:
    """
    Pick n*; ties go to the smaller gamma, then to the earlier candidate.

    Raises:
        EmptyCandidates: no candidates
    """
    if not candidates:
        raise EmptyCandidates("reorientation needs at least one candidate")
    if target_dist is None:
        target_dist = math.dist(xg, x0)
    best = min(
        range(len(candidates)),
        key=lambda i: (
            reorient_cost(candidates[i], x0, target_dist, alpha_weight),
            candidates[i].gamma,
            i,
        ),
    )
    return candidates[best].cell


def reorient_candidates(
    grid: GridMap, pose: PoseState, forward_m: Meters, costs: CostGrid
) -> list[ReorientCandidate]:
    """
    Free, non-dilated cells in line of sight within forward_m + 0.5 m of the pose,
    in row-major order.
    """
    reach = forward_m + CANDIDATE_MARGIN
    cs = grid.cell_size
    r0, c0 = grid.world_to_cell(pose.x, pose.y)
    span = int(math.ceil(reach / cs)) + 1
    rows = range(max(r0 - span, 0), min(r0 + span + 1, grid.height))
    cols = range(max(c0 - span, 0), min(c0 + span + 1, grid.width))
    free = grid.free_mask()
    out = []
    for r in rows:
        for c in cols:
            if not free[r, c] or costs.costs[r, c] != BASE_COST:
                continue
            point = grid.cell_center(r, c)
            if math.dist(point, pose.position) > reach:
                continue
            if not line_of_sight(grid, pose.position, point):
                continue
            bearing = math.atan2(point[1] - pose.y, point[0] - pose.x)
            gamma = abs(normalize_angle(bearing - pose.heading))
            out.append(ReorientCandidate((r, c), point, min(gamma, math.pi)))
    return out

