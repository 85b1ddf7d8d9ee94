"""
Episodes and episode dataset files.

A dataset file is a JSON array of episode objects; subgoal programs are stored as
program text.
"""
import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from deskvln.embodiment.pose import PoseState
from deskvln.errors import DeskVlnError, OutOfBounds, SchemaMismatch, ValidationError
from deskvln.plan.geodesic import geodesic_distance
from deskvln.semnav.program import SubgoalProgram, format_program, parse_program
from deskvln.utils.typehints import Meters, Point
from deskvln.world.gridmap import CellKind, GridMap
from deskvln.world.raycast import line_of_sight

logger = logging.getLogger(__name__)

DATASET_SCHEMA_VERSION = 1
EPISODE_FIELDS = (
    "episode_id",
    "scene_id",
    "start",
    "goal",
    "reference_path",
    "instruction_text",
    "subgoals",
    "split",
)


class Split(str, Enum):
    TRAIN = "train"
    VAL_SEEN = "val_seen"
    VAL_UNSEEN = "val_unseen"


SPLITS_ORDER = tuple(s.value for s in Split)


@dataclass(frozen=True)
class Episode:
    """
    Attributes:
        episode_id: Unique id within a dataset
        scene_id: Map the episode belongs to
        start: (x, y, heading)
        goal: (x, y)
        reference_path: Polyline from start to goal
        instruction_text: Natural-language instruction
        subgoals: Optional structured program for map-based agents
        split: Dataset split
    """

    episode_id: str
    scene_id: str
    start: tuple[float, float, float]
    goal: Point
    reference_path: tuple[Point, ...]
    instruction_text: str
    subgoals: SubgoalProgram | None = None
    split: Split = Split.TRAIN

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(float(v) for v in self.start))
        object.__setattr__(self, "goal", tuple(float(v) for v in self.goal))
        object.__setattr__(
            self, "reference_path", tuple(tuple(float(v) for v in p) for p in self.reference_path)
        )
        object.__setattr__(self, "split", Split(self.split))
        if len(self.start) != 3 or len(self.goal) != 2:
            raise ValidationError(
                f"episode {self.episode_id}: start must be (x, y, heading) and goal (x, y)"
            )

    @property
    def start_pose(self) -> PoseState:
        x, y, heading = self.start
        return PoseState(x, y, heading)

    @property
    def reference_length(self) -> Meters:
        path = self.reference_path
        return math.fsum(math.dist(a, b) for a, b in zip(path, path[1:]))

    def to_dict(self) -> dict:
        return {
            "episode_id": self.episode_id,
            "scene_id": self.scene_id,
            "start": list(self.start),
            "goal": list(self.goal),
            "reference_path": [list(p) for p in self.reference_path],
            "instruction_text": self.instruction_text,
            "subgoals": None if self.subgoals is None else format_program(self.subgoals),
            "split": self.split.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Episode":
        """
        Raises:
            SchemaMismatch: missing fields
            ParseError: unparsable subgoal program
        """
        missing = [name for name in EPISODE_FIELDS if name not in data]
        if missing:
            raise SchemaMismatch(f"episode is missing {', '.join(missing)}")
        subgoals = data["subgoals"]
        return cls(
            episode_id=str(data["episode_id"]),
            scene_id=str(data["scene_id"]),
            start=tuple(data["start"]),
            goal=tuple(data["goal"]),
            reference_path=tuple(tuple(p) for p in data["reference_path"]),
            instruction_text=str(data["instruction_text"]),
            subgoals=None if subgoals is None else parse_program(subgoals),
            split=Split(data["split"]),
        )


def dump_episodes(episodes: list[Episode]) -> str:
    """Canonical dataset text: stable key order, two-space indent, trailing newline."""
    return json.dumps([e.to_dict() for e in episodes], indent=2) + "\n"


def parse_episodes(text: str) -> list[Episode]:
    """
    Raises:
        SchemaMismatch: the text is not a JSON array of episodes
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaMismatch(f"dataset is not valid JSON: {e}") from None
    if not isinstance(data, list):
        raise SchemaMismatch("dataset must be a JSON array of episodes")
    return [Episode.from_dict(item) for item in data]


def save_episodes(path: str | Path, episodes: list[Episode]) -> Path:
    path = Path(path)
    path.write_text(dump_episodes(episodes), encoding="utf-8")
    return path


def load_episodes(path: str | Path) -> list[Episode]:
    return parse_episodes(Path(path).read_text(encoding="utf-8"))


def episode_problems(
    episode: Episode, grid: GridMap, min_len: Meters = 0.0, max_len: Meters = math.inf
) -> list[str]:
    """
    Everything wrong with an episode on a map; empty when it is valid.

    Checks that start and goal lie on Free cells, that the reference path runs from
    start to goal through line of sight, and that the start-goal geodesic length is
    within [min_len, max_len].
    """
    problems = []
    for name, point in (("start", episode.start[:2]), ("goal", episode.goal)):
        try:
            if grid.kind_at(*point) is not CellKind.FREE:
                problems.append(f"{name} is not on a free cell")
        except OutOfBounds:
            problems.append(f"{name} is off the map")
    if problems:
        return problems
    path = episode.reference_path
    if len(path) < 2 or path[0] != episode.start[:2] or path[-1] != episode.goal:
        problems.append("reference path does not run from start to goal")
    elif not all(line_of_sight(grid, a, b) for a, b in zip(path, path[1:])):
        problems.append("reference path crosses an obstacle")
    try:
        length = geodesic_distance(grid, episode.start[:2], episode.goal)
    except DeskVlnError as e:
        problems.append(str(e))
    else:
        if not min_len <= length <= max_len:
            problems.append(f"geodesic length {length:.2f}m outside [{min_len}, {max_len}]")
    return problems