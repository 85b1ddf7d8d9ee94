"""
Text replays of recorded episodes.

Each frame is the map drawn with one character per cell, the agent drawn as an arrow
for its heading (X once fallen) and the cells it has passed through as '*'. A frame
header names the step, the decision executed in it and any events, so a trace with
k steps replays as k + 1 frames.
"""
import logging
import math
from pathlib import Path

from deskvln.bench.results import read_traces
from deskvln.control.rollout import EpisodeTrace
from deskvln.errors import ValidationError
from deskvln.world.gridmap import GridMap, load_map_file, map_rows

logger = logging.getLogger(__name__)

# indexed by the nearest quarter turn, heading measured from +x (right) toward +y (down)
ARROWS = (">", "v", "<", "^")
FALLEN = "X"
TRAIL = "*"


def agent_char(heading: float, fallen: bool = False) -> str:
    if fallen:
        return FALLEN
    return ARROWS[round(heading / (math.pi / 2)) % 4]


def base_rows(grid: GridMap) -> list[list[str]]:
    return [list(line) for line in map_rows(grid)]


def _cell(grid: GridMap, x: float, y: float) -> tuple[int, int] | None:
    row, col = int(math.floor(y / grid.cell_size)), int(math.floor(x / grid.cell_size))
    return (row, col) if grid.in_bounds(row, col) else None


def render_frames(trace: EpisodeTrace, grid: GridMap) -> list[str]:
    """One text frame per pose in the trace."""
    base = base_rows(grid)
    trail: set[tuple[int, int]] = set()
    frames = []
    for step, pose in enumerate(trace.poses):
        rows = [row[:] for row in base]
        for r, c in trail:
            rows[r][c] = TRAIL
        cell = _cell(grid, pose.x, pose.y)
        if cell is not None:
            rows[cell[0]][cell[1]] = agent_char(pose.heading, pose.fallen)
            trail.add(cell)
        action = trace.actions[step - 1] if 0 < step <= len(trace.actions) else "start"
        header = f"step {step}/{trace.steps}  {action}"
        events = [e.kind.value.upper() for e in trace.events if e.step == step]
        if events:
            header += "  " + " ".join(events)
        header += f"  ({pose.x:.2f}, {pose.y:.2f}) heading {math.degrees(pose.heading):.0f}"
        frames.append("\n".join([header, *("".join(r) for r in rows)]))
    return frames


def render_trace(trace: EpisodeTrace, grid: GridMap) -> str:
    lines = [f"episode {trace.episode_id}", ""]
    for frame in render_frames(trace, grid):
        lines += [frame, ""]
    terminal = trace.terminal
    outcome = terminal.kind.value if terminal else "running"
    if trace.failure_reason:
        outcome += f" ({trace.failure_reason})"
    lines.append(f"TL {trace.path_length():.6f}  steps {trace.steps}  end {outcome}")
    return "\n".join(lines) + "\n"


def cmd_replay(
    traces_path: str | Path, map_file: str | Path, episode_id: str | None = None
) -> str:
    """
    Render every trace in traces_path, or only episode_id, against the map.

    Raises:
        FileNotFoundError: traces or map missing
        ParseError, SchemaMismatch: corrupt traces file
        ValidationError: episode_id not in the file
    """
    traces_path = Path(traces_path)
    if not traces_path.exists():
        raise FileNotFoundError(f"Traces not found: {traces_path}")
    grid = load_map_file(map_file)
    traces = read_traces(traces_path)
    if episode_id is not None:
        traces = [t for t in traces if t.episode_id == episode_id]
        if not traces:
            raise ValidationError(f"episode {episode_id!r} is not in {traces_path}")
    logger.debug("replaying %d traces from %s", len(traces), traces_path)
    return "\n".join(render_trace(t, grid) for t in traces)
