"""
Incremental semantic map: per-cell label scores, an explored mask and an obstacle
mask, all built from observations.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from deskvln.embodiment.pose import PoseState
from deskvln.errors import ShapeMismatch, UnknownLabel
from deskvln.utils.typehints import Cell, Meters
from deskvln.world.gridmap import GridMap
from deskvln.world.observe import Observation

logger = logging.getLogger(__name__)

DETECTION_THRESHOLD = 0.5


@dataclass(eq=False)
class SemanticMap:
    """
    Attributes:
        vocabulary: Label names, one score channel each
        scores: (height, width, len(vocabulary)) scores in [0, 1]
        explored: (height, width) cells seen by at least one ray
        obstacles: (height, width) cells where a ray ended on an obstacle
        cell_size: Meters per cell
    """

    vocabulary: tuple[str, ...]
    scores: np.ndarray
    explored: np.ndarray
    obstacles: np.ndarray
    cell_size: Meters

    def __post_init__(self):
        h, w = self.explored.shape
        if self.obstacles.shape != (h, w) or self.scores.shape != (h, w, len(self.vocabulary)):
            raise ShapeMismatch("semantic map layers must share the map dimensions")

    @classmethod
    def empty(cls, grid: GridMap, vocabulary: tuple[str, ...] | None = None) -> "SemanticMap":
        vocabulary = tuple(vocabulary if vocabulary is not None else grid.vocabulary)
        shape = grid.cells.shape
        return cls(
            vocabulary=vocabulary,
            scores=np.zeros((*shape, len(vocabulary))),
            explored=np.zeros(shape, dtype=bool),
            obstacles=np.zeros(shape, dtype=bool),
            cell_size=grid.cell_size,
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.explored.shape

    def channel(self, label: str) -> int:
        try:
            return self.vocabulary.index(label)
        except ValueError:
            raise UnknownLabel(label) from None

    def explored_fraction(self) -> float:
        return float(self.explored.mean())

    def indexed_labels(self, threshold: float = DETECTION_THRESHOLD) -> list[str]:
        """Labels whose best score exceeds threshold, in vocabulary order."""
        if not self.vocabulary:
            return []
        peaks = self.scores.reshape(-1, len(self.vocabulary)).max(axis=0)
        return [name for name, peak in zip(self.vocabulary, peaks) if peak > threshold]

    def copy(self) -> "SemanticMap":
        return SemanticMap(
            self.vocabulary,
            self.scores.copy(),
            self.explored.copy(),
            self.obstacles.copy(),
            self.cell_size,
        )


def integrate_observation(smap: SemanticMap, obs: Observation, pose: PoseState) -> SemanticMap:
    """
    Fuse one observation into smap in place (and return it).

    Cells along each depth ray are marked explored; a ray that ends before max_range
    marks the cell just past its end as an explored obstacle. Visible labels are
    max-merged into the score channel of their cell.
    """
    cs = smap.cell_size
    height, width = smap.shape
    headings = pose.heading + np.asarray(obs.ray_bearings)
    depths = np.asarray(obs.depth_rays, dtype=float)
    step = cs / 4
    n = int(math.ceil(float(depths.max(initial=0.0)) / step)) + 1
    t = np.arange(n) * step
    ts = np.minimum(t[None, :], depths[:, None])
    xs = pose.x + ts * np.cos(headings)[:, None]
    ys = pose.y + ts * np.sin(headings)[:, None]
    inside = (t[None, :] < depths[:, None]) | (t[None, :] == 0)
    _mark(smap.explored, xs[inside], ys[inside], cs)

    hit = depths < obs.max_range
    ends = depths[hit] + cs * 1e-3
    ex = pose.x + ends * np.cos(headings[hit])
    ey = pose.y + ends * np.sin(headings[hit])
    _mark(smap.explored, ex, ey, cs)
    _mark(smap.obstacles, ex, ey, cs)

    for label in obs.visible_labels:
        if label.name not in smap.vocabulary:
            logger.debug("ignoring label %r outside the vocabulary", label.name)
            continue
        angle = pose.heading + label.bearing
        col = math.floor((pose.x + label.distance * math.cos(angle)) / cs)
        row = math.floor((pose.y + label.distance * math.sin(angle)) / cs)
        if not (0 <= row < height and 0 <= col < width):
            continue
        v = smap.vocabulary.index(label.name)
        smap.explored[row, col] = True
        smap.scores[row, col, v] = max(smap.scores[row, col, v], label.score)
    return smap


def _mark(mask: np.ndarray, xs: np.ndarray, ys: np.ndarray, cell_size: Meters) -> None:
    cols = np.floor(xs / cell_size).astype(int)
    rows = np.floor(ys / cell_size).astype(int)
    ok = (rows >= 0) & (rows < mask.shape[0]) & (cols >= 0) & (cols < mask.shape[1])
    mask[rows[ok], cols[ok]] = True


def index_landmark(
    smap: SemanticMap, label: str, threshold: float = DETECTION_THRESHOLD
) -> Cell | None:
    """
    Locate a label: the 8-connected region of positive scores with the highest peak,
    reduced to its centroid cell (or the region cell nearest the centroid when the
    centroid falls outside the region). None when that peak is not above threshold.

    Raises:
        UnknownLabel: label is not in the vocabulary
    """
    layer = smap.scores[:, :, smap.channel(label)]
    if layer.size == 0 or layer.max() <= threshold:
        return None
    regions, count = ndimage.label(layer > 0, structure=np.ones((3, 3), dtype=bool))
    peaks = ndimage.maximum(layer, regions, index=np.arange(1, count + 1))
    best = int(np.argmax(peaks)) + 1
    cells = np.argwhere(regions == best)
    centroid = cells.mean(axis=0)
    r, c = int(round(centroid[0])), int(round(centroid[1]))
    if regions[r, c] == best:
        return r, c
    nearest = int(np.argmin(((cells - centroid) ** 2).sum(axis=1)))
    return int(cells[nearest][0]), int(cells[nearest][1])
