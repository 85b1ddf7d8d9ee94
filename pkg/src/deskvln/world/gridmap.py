"""
Occupancy + semantic-label grid worlds and the map text format.

Map text:
    cellsize 0.1
    label s sofa
    label t table
    #######
    #..s..#
    #.H.t.#
    #######

'.' is Free, '#' Obstacle, 'H' Hole; every character declared with a label line is a
Free cell carrying that label. Row 0 is the first grid line. World coordinates put x
along columns and y along rows, so cell (row, col) spans
[col*cs, (col+1)*cs) x [row*cs, (row+1)*cs).
"""
import math
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

import numpy as np

from deskvln.errors import OutOfBounds, ParseError, ValidationError
from deskvln.utils.typehints import Cell, LabelId, Meters, Point


class CellKind(IntEnum):
    FREE = 0
    OBSTACLE = 1
    HOLE = 2


CELL_CHARS = {".": CellKind.FREE, "#": CellKind.OBSTACLE, "H": CellKind.HOLE}
KIND_CHARS = {kind: ch for ch, kind in CELL_CHARS.items()}


@dataclass(frozen=True, eq=False)
class GridMap:
    """
    Immutable grid world.

    Attributes:
        cell_size: Meters per cell (> 0)
        cells: (height, width) uint8 array of CellKind values
        labels: (height, width) int array of label ids, 0 = none
        legend: Map characters for label ids 1..n, in declaration order
        names: Semantic names for label ids 1..n (several ids may share a name)
        scene_id: Identifier used by episodes to refer to this map
    """

    cell_size: Meters
    cells: np.ndarray
    labels: np.ndarray
    legend: tuple[str, ...] = ()
    names: tuple[str, ...] = ()
    scene_id: str = "scene"
    _landmarks: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.uint8)
        labels = np.array(self.labels, dtype=np.int32)
        cells.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "labels", labels)
        validate_map(self)
        rows, cols = np.nonzero(labels)
        object.__setattr__(
            self, "_landmarks", [(int(labels[r, c]), int(r), int(c)) for r, c in zip(rows, cols)]
        )

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def vocabulary(self) -> tuple[str, ...]:
        """Distinct label names in first-declaration order."""
        return tuple(dict.fromkeys(self.names))

    def label_name(self, label_id: LabelId) -> str:
        if label_id <= 0 or label_id > len(self.names):
            raise KeyError(label_id)
        return self.names[label_id - 1]

    def landmarks(self) -> list[tuple[LabelId, int, int]]:
        """All labeled cells as (label_id, row, col), row-major."""
        return list(self._landmarks)

    def in_bounds(self, row: int, col: int) -> bool:
        return 0 <= row < self.height and 0 <= col < self.width

    def world_to_cell(self, x: Meters, y: Meters) -> Cell:
        col = math.floor(x / self.cell_size)
        row = math.floor(y / self.cell_size)
        if not self.in_bounds(row, col):
            size = f"{self.width}x{self.height}"
            raise OutOfBounds(f"point ({x:.3f}, {y:.3f}) is outside the {size} map")
        return row, col

    def cell_center(self, row: int, col: int) -> Point:
        return (col + 0.5) * self.cell_size, (row + 0.5) * self.cell_size

    def kind(self, row: int, col: int) -> CellKind:
        return CellKind(int(self.cells[row, col]))

    def kind_at(self, x: Meters, y: Meters) -> CellKind:
        return self.kind(*self.world_to_cell(x, y))

    def is_traversable(self, row: int, col: int) -> bool:
        return self.in_bounds(row, col) and self.cells[row, col] != CellKind.OBSTACLE

    def free_mask(self) -> np.ndarray:
        return self.cells == CellKind.FREE

    def traversable_mask(self) -> np.ndarray:
        return self.cells != CellKind.OBSTACLE

    def obstacle_mask(self) -> np.ndarray:
        return self.cells == CellKind.OBSTACLE

    def clearance(self, x: Meters, y: Meters, limit: Meters) -> Meters:
        """
        Distance from (x, y) to the nearest point of any Obstacle cell, or limit if
        none lies within limit. Zero when the point is inside an Obstacle cell.
        """
        cs = self.cell_size
        reach = int(math.ceil(limit / cs)) + 1
        c0 = math.floor(x / cs)
        r0 = math.floor(y / cs)
        rlo, rhi = max(r0 - reach, 0), min(r0 + reach + 1, self.height)
        clo, chi = max(c0 - reach, 0), min(c0 + reach + 1, self.width)
        if rlo >= rhi or clo >= chi:
            return limit
        rows, cols = np.nonzero(self.cells[rlo:rhi, clo:chi] == CellKind.OBSTACLE)
        if rows.size == 0:
            return limit
        left = (cols + clo) * cs
        top = (rows + rlo) * cs
        dx = np.maximum(np.maximum(left - x, x - (left + cs)), 0.0)
        dy = np.maximum(np.maximum(top - y, y - (top + cs)), 0.0)
        return float(min(np.hypot(dx, dy).min(), limit))


def validate_map(grid: GridMap) -> None:
    if not (grid.cell_size > 0 and math.isfinite(grid.cell_size)):
        raise ValidationError(f"cell size must be positive, got {grid.cell_size}")
    if grid.cells.ndim != 2 or grid.cells.size == 0:
        raise ValidationError("map grid must be a non-empty 2D array")
    if grid.labels.shape != grid.cells.shape:
        raise ValidationError("label grid must match the cell grid")
    if len(grid.legend) != len(grid.names):
        raise ValidationError("legend and names must have the same length")
    if grid.labels.min() < 0 or grid.labels.max() > len(grid.names):
        raise ValidationError("label ids must refer to declared names")
    border = np.concatenate([grid.cells[0], grid.cells[-1], grid.cells[:, 0], grid.cells[:, -1]])
    if np.any(border != CellKind.OBSTACLE):
        raise ValidationError("map border must be Obstacle (closed world)")
    if np.any((grid.labels > 0) & (grid.cells != CellKind.FREE)):
        raise ValidationError("labeled cells must be Free")


def load_map(text: str, scene_id: str = "scene") -> GridMap:
    """
    Parse map text into a validated GridMap.

    Raises:
        ParseError: missing/bad cellsize header, bad label line, unknown character, ragged rows
        ValidationError: open border, non-positive cell size
    """
    lines = [line.rstrip("\r") for line in text.splitlines()]
    lines = [line for line in lines if line.strip()]
    if not lines:
        raise ParseError("empty map text")

    header = lines[0].split()
    if len(header) != 2 or header[0] != "cellsize":
        raise ParseError(f"first line must be 'cellsize <meters>', got {lines[0]!r}")
    try:
        cell_size = float(header[1])
    except ValueError:
        raise ParseError(f"bad cell size {header[1]!r}") from None

    legend: list[str] = []
    names: list[str] = []
    rows: list[str] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("label "):
            parts = line.split(maxsplit=2)
            if len(parts) != 3 or len(parts[1]) != 1:
                raise ParseError(f"line {lineno}: expected 'label <char> <name>'")
            ch, name = parts[1], parts[2].strip()
            if ch in CELL_CHARS or ch in legend:
                raise ParseError(f"line {lineno}: label character {ch!r} is already in use")
            legend.append(ch)
            names.append(name)
        else:
            rows.append(line)

    if not rows:
        raise ParseError("map has no grid rows")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"row {i} has length {len(row)}, expected {width}")

    label_ids = {ch: i + 1 for i, ch in enumerate(legend)}
    cells = np.zeros((len(rows), width), dtype=np.uint8)
    labels = np.zeros((len(rows), width), dtype=np.int32)
    for r, row in enumerate(rows):
        for c, ch in enumerate(row):
            if ch in CELL_CHARS:
                cells[r, c] = CELL_CHARS[ch]
            elif ch in label_ids:
                labels[r, c] = label_ids[ch]
            else:
                raise ParseError(f"row {r}, column {c}: unknown map character {ch!r}")

    return GridMap(
        cell_size=cell_size,
        cells=cells,
        labels=labels,
        legend=tuple(legend),
        names=tuple(names),
        scene_id=scene_id,
    )


def load_map_file(path: str | Path) -> GridMap:
    """Read a map file; the scene id is the file stem."""
    path = Path(path).expanduser()
    if not path.exists():
        raise FileNotFoundError(f"Map file not found: {path}")
    return load_map(path.read_text(encoding="utf-8"), scene_id=path.stem)


def map_rows(grid: GridMap) -> list[str]:
    """The grid lines of the map text, labels drawn with their legend characters."""
    rows = []
    for r in range(grid.height):
        row = []
        for c in range(grid.width):
            label = int(grid.labels[r, c])
            row.append(grid.legend[label - 1] if label else KIND_CHARS[grid.kind(r, c)])
        rows.append("".join(row))
    return rows


def dump_map(grid: GridMap) -> str:
    """Canonical map text; load_map(dump_map(m)) reproduces m."""
    lines = [f"cellsize {grid.cell_size:g}"]
    lines += [f"label {ch} {name}" for ch, name in zip(grid.legend, grid.names)]
    lines += map_rows(grid)
    return "\n".join(lines) + "\n"
