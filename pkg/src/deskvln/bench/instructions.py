"""
Template instructions and subgoal programs from a reference path.

The path is cut into straight runs wherever the heading changes by more than the turn
threshold. Runs become "walk forward about N meters", heading changes become "turn
left" / "turn right", and the instruction closes with the nearest landmark visible from
the goal when there is one.
"""
import math
from dataclasses import dataclass

from deskvln.embodiment.pose import normalize_angle
from deskvln.semnav.program import MoveForward, MoveToObject, Stop, SubgoalProgram, Turn
from deskvln.utils.typehints import Degrees, Meters, Point, Radians
from deskvln.world.gridmap import GridMap
from deskvln.world.raycast import line_of_sight

TURN_THRESHOLD_DEG = 30.0
LANDMARK_RADIUS = 2.0


@dataclass(frozen=True)
class PathLeg:
    """A turn by `turn` radians (positive = left) followed by a straight run."""

    turn: Radians
    length: Meters


def path_legs(
    path: list[Point], start_heading: Radians, turn_threshold: Degrees = TURN_THRESHOLD_DEG
) -> list[PathLeg]:
    """Straight runs of path; a run's turn is zero when within turn_threshold."""
    threshold = math.radians(turn_threshold)
    legs: list[PathLeg] = []
    heading = start_heading
    run_heading = None
    turn = 0.0
    length = 0.0
    for a, b in zip(path, path[1:]):
        seg = math.dist(a, b)
        if seg == 0.0:
            continue
        bearing = math.atan2(b[1] - a[1], b[0] - a[0])
        if run_heading is None:
            run_heading = bearing
            change = normalize_angle(bearing - heading)
            turn = change if abs(change) > threshold else 0.0
        elif abs(normalize_angle(bearing - run_heading)) > threshold:
            legs.append(PathLeg(turn, length))
            turn = normalize_angle(bearing - run_heading)
            run_heading = bearing
            length = 0.0
        length += seg
    if run_heading is not None:
        legs.append(PathLeg(turn, length))
    return legs


def goal_landmark(grid: GridMap, goal: Point, radius: Meters = LANDMARK_RADIUS) -> str | None:
    """Name of the closest labeled cell within radius of goal and in line of sight."""
    best = None
    for label_id, row, col in grid.landmarks():
        center = grid.cell_center(row, col)
        d = math.dist(goal, center)
        if d <= radius and (best is None or d < best[0]) and line_of_sight(grid, goal, center):
            best = (d, grid.label_name(label_id))
    return None if best is None else best[1]


def describe_path(
    grid: GridMap,
    path: list[Point],
    start_heading: Radians,
    turn_threshold: Degrees = TURN_THRESHOLD_DEG,
    landmark_radius: Meters = LANDMARK_RADIUS,
) -> tuple[str, SubgoalProgram]:
    """
    Instruction text and a matching subgoal program for following path.

    The program is move_to_object + stop when a landmark is near the goal, otherwise
    turn / move_forward legs + stop.
    """
    legs = path_legs(path, start_heading, turn_threshold)
    phrases = []
    subgoals = []
    for leg in legs:
        if leg.turn:
            phrases.append("turn left" if leg.turn > 0 else "turn right")
            subgoals.append(Turn(round(math.degrees(leg.turn), 1)))
        phrases.append(f"walk forward about {leg.length:.1f} meters")
        subgoals.append(MoveForward(round(leg.length, 2)))
    landmark = goal_landmark(grid, path[-1], landmark_radius) if path else None
    if landmark is None:
        phrases.append("stop")
    else:
        phrases.append(f"stop next to the {landmark}")
        subgoals = [MoveToObject(landmark)]
    text = ", then ".join(phrases)
    return text[0].upper() + text[1:] + ".", SubgoalProgram((*subgoals, Stop()))
