"""
Planning on grid maps: cost grids, A*, geodesic distances, frontiers and
reorientation-node selection.
"""

from deskvln.plan.costgrid import (
    BASE_COST,
    BLOCKED,
    CostGrid,
    PlannerConfig,
    dilate,
    dilation_mask,
    plan_costs,
    uniform_costs,
)
from deskvln.plan.astar import NEIGHBORS, astar, octile, path_cost
from deskvln.plan.geodesic import (
    GeodesicField,
    build_graph,
    distance_field,
    geodesic_distance,
    geodesic_field,
)
from deskvln.plan.frontier import detect_frontiers, frontier_mask
from deskvln.plan.reorient import (
    REORIENT_ALPHA,
    ReorientCandidate,
    reorient_candidates,
    reorient_cost,
    select_reorient_node,
)
from deskvln.plan.paths import cells_to_points, plan_path, polyline_length, resample_path
