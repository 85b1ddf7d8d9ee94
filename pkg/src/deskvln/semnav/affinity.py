"""
Label affinity table: hand-authored similarity scores between object labels and
room or landmark labels, standing in for vision-language embeddings.

CSV layout: the header row names the columns (first cell ignored), every other row
starts with an object label followed by one score per column.
"""
import csv
import io
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from deskvln.errors import ParseError, ValidationError
from deskvln.utils.assets import asset_path

logger = logging.getLogger(__name__)

ROOM_NAMES = ("living room", "dining room", "bedroom", "kitchen", "toilet", "others")
OTHERS = "others"
DEFAULT_AFFINITY_FILE = asset_path("affinity.csv")


@dataclass(frozen=True, eq=False)
class AffinityTable:
    """
    Attributes:
        objects: Row labels
        columns: Column labels (rooms and landmarks)
        values: (len(objects), len(columns)) scores in [0, 1]
    """

    objects: tuple[str, ...]
    columns: tuple[str, ...]
    values: np.ndarray
    _rows: dict[str, int] = field(init=False, repr=False)
    _cols: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.objects), len(self.columns)):
            raise ValidationError(
                f"affinity values have shape {values.shape}, "
                f"expected ({len(self.objects)}, {len(self.columns)})"
            )
        if values.size and (not np.isfinite(values).all() or values.min() < 0 or values.max() > 1):
            raise ValidationError("affinity scores must lie in [0, 1]")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_rows", {name: i for i, name in enumerate(self.objects)})
        object.__setattr__(self, "_cols", {name: j for j, name in enumerate(self.columns)})

    def affinity(self, a: str, b: str) -> float:
        """
        Score between two labels, looked up in either orientation. A label has affinity 1
        with itself; pairs the table does not cover score 0.
        """
        if a == b:
            return 1.0
        i, j = self._rows.get(a), self._cols.get(b)
        if i is not None and j is not None:
            return float(self.values[i, j])
        i, j = self._rows.get(b), self._cols.get(a)
        if i is not None and j is not None:
            return float(self.values[i, j])
        return 0.0

    def mean_affinity(self, labels: list[str], target: str) -> float:
        """Mean affinity of labels to target; 0 for no labels."""
        if not labels:
            return 0.0
        return math.fsum(self.affinity(label, target) for label in labels) / len(labels)

    @property
    def labels(self) -> set[str]:
        return set(self.objects) | set(self.columns)


def parse_affinity_csv(text: str) -> AffinityTable:
    """
    Raises:
        ParseError: empty table, ragged rows or non-numeric scores
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in row)]
    if not rows:
        raise ParseError("affinity table is empty")
    columns = tuple(cell.strip() for cell in rows[0][1:])
    objects, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(columns) + 1:
            raise ParseError(
                f"affinity row {lineno} has {len(row) - 1} scores, expected {len(columns)}"
            )
        try:
            values.append([float(cell) for cell in row[1:]])
        except ValueError as e:
            raise ParseError(f"affinity row {lineno}: {e}") from None
        objects.append(row[0].strip())
    values = np.array(values, dtype=float).reshape(len(objects), len(columns))
    return AffinityTable(tuple(objects), columns, values)


def load_affinity_csv(path: str | Path) -> AffinityTable:
    path = Path(path)
    table = parse_affinity_csv(path.read_text(encoding="utf-8"))
    logger.debug("loaded affinity table %s: %d x %d", path, len(table.objects), len(table.columns))
    return table


@lru_cache(maxsize=1)
def default_affinity() -> AffinityTable:
    """The packaged default table."""
    return load_affinity_csv(DEFAULT_AFFINITY_FILE)
