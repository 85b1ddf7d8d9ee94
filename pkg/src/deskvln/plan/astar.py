"""
A* over 8-connected cost grids.

Moving into a cell costs step_length * cost(cell), with step length 1 for straight
and sqrt(2) for diagonal moves (in cells). A diagonal move needs both cells it
passes between to be unblocked.
"""
import heapq
import math

import numpy as np

from deskvln.errors import NoPath
from deskvln.plan.costgrid import CostGrid
from deskvln.utils.typehints import Cell

NEIGHBORS = (
    (-1, -1, math.sqrt(2)),
    (-1, 0, 1.0),
    (-1, 1, math.sqrt(2)),
    (0, -1, 1.0),
    (0, 1, 1.0),
    (1, -1, math.sqrt(2)),
    (1, 0, 1.0),
    (1, 1, math.sqrt(2)),
)
OCTILE = math.sqrt(2) - 1.0


def octile(a: Cell, b: Cell) -> float:
    dr, dc = abs(a[0] - b[0]), abs(a[1] - b[1])
    return max(dr, dc) + OCTILE * min(dr, dc)


def path_cost(costs: CostGrid, path: list[Cell]) -> float:
    """Cost of a cell path under the edge rule above, summed from the start."""
    total = 0.0
    for (r0, c0), (r1, c1) in zip(path, path[1:]):
        step = math.sqrt(2) if r0 != r1 and c0 != c1 else 1.0
        total += step * costs.costs[r1, c1]
    return total


def astar(costs: CostGrid, start: Cell, goal: Cell) -> list[Cell]:
    """
    Minimal-cost path from start to goal, both included.

    Heap entries are (f, cell index), so equal f values expand the lower row-major
    index first and the result is deterministic.

    Raises:
        NoPath: start or goal is blocked, or they are not connected
    """
    start, goal = (int(start[0]), int(start[1])), (int(goal[0]), int(goal[1]))
    if costs.blocked(start) or costs.blocked(goal):
        raise NoPath(f"no path from {start} to {goal}: endpoint blocked")
    if start == goal:
        return [start]

    grid = costs.costs
    height, width = grid.shape
    finite = grid[np.isfinite(grid)]
    h_scale = float(finite.min())
    g = np.full(height * width, math.inf)
    parent = np.full(height * width, -1, dtype=np.int64)
    closed = np.zeros(height * width, dtype=bool)
    s = start[0] * width + start[1]
    t = goal[0] * width + goal[1]
    g[s] = 0.0
    heap = [(h_scale * octile(start, goal), s)]

    while heap:
        _, idx = heapq.heappop(heap)
        if closed[idx]:
            continue
        if idx == t:
            break
        closed[idx] = True
        r, c = divmod(idx, width)
        for dr, dc, step in NEIGHBORS:
            nr, nc = r + dr, c + dc
            if not (0 <= nr < height and 0 <= nc < width):
                continue
            cost = grid[nr, nc]
            if cost == math.inf:
                continue
            if dr and dc and (grid[r + dr, c] == math.inf or grid[r, c + dc] == math.inf):
                continue
            nidx = nr * width + nc
            if closed[nidx]:
                continue
            candidate = g[idx] + step * cost
            if candidate < g[nidx]:
                g[nidx] = candidate
                parent[nidx] = idx
                heapq.heappush(heap, (candidate + h_scale * octile((nr, nc), goal), nidx))

    if not math.isfinite(g[t]):
        raise NoPath(f"no path from {start} to {goal}")
    path = [t]
    while path[-1] != s:
        path.append(int(parent[path[-1]]))
    return [divmod(i, width) for i in reversed(path)]
