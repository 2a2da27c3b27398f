"""Occupancy-grid placement of annotation boxes.

The canvas is rasterised into square cells. Scene leaves claim the cells they
cover, then annotation boxes are assigned to candidate slots around their
targets by a depth-first backtracking search that only accepts fully free,
on-canvas slots.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import settings
from ..geometry import Line, Point, Polygon, Polyline, Rect
from ..grammar import Anchor1D, Anchor1DKind, Anchor2D, Anchor2DKind, FixedPosition, Position
from ..scene import AxisPart, AxisPartKind, PlotArea, SceneGraph, SceneNode
from ..utils import diagnostic
from .resolver import ResolvedTarget

logger = logging.getLogger(__name__)

EPS = 1e-9

# Compass ring in search order, as (horizontal, vertical) sides.
RING: Tuple[Anchor2DKind, ...] = (
    Anchor2DKind.UP,
    Anchor2DKind.UP_RIGHT,
    Anchor2DKind.MID_RIGHT,
    Anchor2DKind.DOWN_RIGHT,
    Anchor2DKind.DOWN,
    Anchor2DKind.DOWN_LEFT,
    Anchor2DKind.MID_LEFT,
    Anchor2DKind.UP_LEFT,
)

SIDES: Dict[Anchor2DKind, Tuple[int, int]] = {
    Anchor2DKind.UP: (0, -1),
    Anchor2DKind.UP_RIGHT: (1, -1),
    Anchor2DKind.MID_RIGHT: (1, 0),
    Anchor2DKind.DOWN_RIGHT: (1, 1),
    Anchor2DKind.DOWN: (0, 1),
    Anchor2DKind.DOWN_LEFT: (-1, 1),
    Anchor2DKind.MID_LEFT: (-1, 0),
    Anchor2DKind.UP_LEFT: (-1, -1),
    Anchor2DKind.CENTER: (0, 0),
}


@dataclass
class OccupancyGrid:
    """
    Per-cell occupancy counts over the canvas.

    Counts rather than booleans let the search release a claim without
    disturbing cells that scene nodes or other annotations also cover.
    """
    width: float
    height: float
    cell_size: int = 4
    counts: np.ndarray = field(init=False, repr=False)
    reserved: Dict[str, Rect] = field(default_factory=dict)

    def __post_init__(self):
        if self.cell_size < 1:
            raise ValueError("cell_size must be at least 1")
        self.cols = max(1, math.ceil(self.width / self.cell_size))
        self.rows = max(1, math.ceil(self.height / self.cell_size))
        self.counts = np.zeros((self.rows, self.cols), dtype=np.int32)

    @property
    def occupied(self) -> np.ndarray:
        return self.counts > 0

    @property
    def canvas(self) -> Rect:
        return Rect(0, 0, self.width, self.height)

    def span(self, rect: Rect) -> Optional[Tuple[slice, slice]]:
        """Row and column slices of the cells ``rect`` covers, clipped to the grid."""
        cs = self.cell_size
        c0 = math.floor(rect.x / cs + EPS)
        r0 = math.floor(rect.y / cs + EPS)
        c1 = max(c0, math.ceil(rect.right / cs - EPS) - 1)
        r1 = max(r0, math.ceil(rect.bottom / cs - EPS) - 1)
        if c1 < 0 or r1 < 0 or c0 >= self.cols or r0 >= self.rows:
            return None
        c0, r0 = max(0, c0), max(0, r0)
        c1, r1 = min(self.cols - 1, c1), min(self.rows - 1, r1)
        return slice(r0, r1 + 1), slice(c0, c1 + 1)

    def occupy(self, rect: Rect, amount: int = 1) -> None:
        cells = self.span(rect)
        if cells is not None:
            self.counts[cells] += amount

    def occupy_mask(self, mask: np.ndarray) -> None:
        self.counts += mask.astype(np.int32)

    def occluded_cells(self, rect: Rect) -> int:
        """Number of occupied cells under ``rect``."""
        cells = self.span(rect)
        if cells is None:
            return 0
        return int(np.count_nonzero(self.counts[cells]))

    def on_canvas(self, rect: Rect) -> bool:
        return self.canvas.contains(rect)

    def is_free(self, rect: Rect) -> bool:
        return self.on_canvas(rect) and self.occluded_cells(rect) == 0

    def claim(self, annotation_id: str, rect: Rect) -> None:
        self.occupy(rect)
        self.reserved[annotation_id] = rect

    def release(self, annotation_id: str) -> None:
        rect = self.reserved.pop(annotation_id, None)
        if rect is not None:
            self.occupy(rect, -1)

    def cell_centers(self) -> Tuple[np.ndarray, np.ndarray]:
        half = self.cell_size / 2
        xs = np.arange(self.cols) * self.cell_size + half
        ys = np.arange(self.rows) * self.cell_size + half
        return np.meshgrid(xs, ys)

    def segment_mask(self, points: Sequence[Point]) -> np.ndarray:
        """Cells crossed by a polyline, sampled at half-cell spacing."""
        mask = np.zeros((self.rows, self.cols), dtype=bool)
        for (x1, y1), (x2, y2) in zip(points, points[1:]):
            n = max(2, math.ceil(math.hypot(x2 - x1, y2 - y1) / (self.cell_size / 2)) + 1)
            xs = np.linspace(x1, x2, n)
            ys = np.linspace(y1, y2, n)
            cols = np.floor(xs / self.cell_size).astype(int)
            rows = np.floor(ys / self.cell_size).astype(int)
            ok = (cols >= 0) & (cols < self.cols) & (rows >= 0) & (rows < self.rows)
            mask[rows[ok], cols[ok]] = True
        return mask

    def polygon_mask(self, points: Sequence[Point]) -> np.ndarray:
        """Cells whose centres fall inside a closed polygon (even-odd rule)."""
        xs, ys = self.cell_centers()
        inside = np.zeros(xs.shape, dtype=bool)
        n = len(points)
        for k in range(n):
            x1, y1 = points[k]
            x2, y2 = points[(k + 1) % n]
            if y1 == y2:
                continue
            crosses = (y1 > ys) != (y2 > ys)
            x_at = x1 + (ys - y1) * (x2 - x1) / (y2 - y1)
            inside ^= crosses & (xs < x_at)
        return inside


def _occupies(node: SceneNode) -> bool:
    if not node.is_leaf or node.geometry is None or not node.paint.visible:
        return False
    if isinstance(node.tag, PlotArea):
        return False
    return not (isinstance(node.tag, AxisPart) and node.tag.part == AxisPartKind.GRID)


def build_grid(scene: SceneGraph, cell_size: Optional[int] = None) -> OccupancyGrid:
    """
    Rasterise a scene's visible leaves into an occupancy grid.

    Gridlines, the plot background and invisible helper nodes stay free.

    Args:
        scene: Compiled scene
        cell_size: Cell edge in pixels

    Returns:
        Grid with every covered cell counted once per covering node
    """
    grid = OccupancyGrid(scene.width, scene.height, cell_size or settings.grid_size)
    for node in scene.leaves():
        if not _occupies(node):
            continue
        shape = node.geometry
        if isinstance(shape, Polyline):
            grid.occupy_mask(grid.segment_mask(shape.points))
        elif isinstance(shape, Polygon):
            mask = grid.polygon_mask(shape.points)
            mask |= grid.segment_mask(shape.points + shape.points[:1])
            grid.occupy_mask(mask)
        elif isinstance(shape, Line):
            grid.occupy_mask(grid.segment_mask(((shape.x1, shape.y1), (shape.x2, shape.y2))))
        else:
            grid.occupy(node.bbox)
    logger.debug(f"Occupancy grid {grid.cols}x{grid.rows}, {int(np.count_nonzero(grid.counts))} cells occupied")
    return grid


@dataclass(frozen=True)
class Candidate:
    rect: Rect
    anchor: str


def _beside(box: Rect, w: float, h: float, side: Anchor2DKind, gap: float) -> Rect:
    hx, vy = SIDES[side]
    cx, cy = box.center
    x = {-1: box.x - gap - w, 0: cx - w / 2, 1: box.right + gap}[hx]
    y = {-1: box.y - gap - h, 0: cy - h / 2, 1: box.bottom + gap}[vy]
    return Rect(x, y, w, h)


def _along(box: Rect, w: float, h: float, slot: Anchor1DKind, gap: float) -> List[Tuple[Rect, str]]:
    horizontal = box.w >= box.h
    cx, cy = box.center
    if horizontal:
        x = {Anchor1DKind.START: box.x, Anchor1DKind.MID: cx - w / 2, Anchor1DKind.END: box.right - w}[slot]
        ys = (("", cy - h / 2), ("before", box.y - gap - h), ("after", box.bottom + gap))
        return [(Rect(x, y, w, h), f"{slot.value}{'/' + tag if tag else ''}") for tag, y in ys]
    y = {Anchor1DKind.START: box.y, Anchor1DKind.MID: cy - h / 2, Anchor1DKind.END: box.bottom - h}[slot]
    xs = (("", cx - w / 2), ("before", box.x - gap - w), ("after", box.right + gap))
    return [(Rect(x, y, w, h), f"{slot.value}{'/' + tag if tag else ''}") for tag, x in xs]


def candidate_anchors(
    rt: ResolvedTarget,
    size: Tuple[float, float],
    pos: Optional[Position] = None,
    gap: Optional[float] = None,
    ring_gap: Optional[float] = None,
) -> List[Candidate]:
    """
    Ordered candidate boxes around a target.

    Args:
        rt: Resolved target
        size: Box width and height
        pos: Anchor2D or Anchor1D position, automatic when omitted
        gap: Distance between the target and the inner candidate ring
        ring_gap: Distance for the outer candidate ring

    Returns:
        Candidates in search order
    """
    if isinstance(pos, FixedPosition):
        raise ValueError("Fixed positions are pinned, not searched")
    gap = settings.anchor_gap if gap is None else gap
    ring_gap = settings.ring_gap if ring_gap is None else ring_gap
    w, h = size
    box = rt.union_bbox
    dx, dy = (pos.dx, pos.dy) if pos is not None else (0.0, 0.0)

    if isinstance(pos, Anchor1D):
        slots = list(Anchor1DKind)[1:] if pos.anchor == Anchor1DKind.AUTO else [pos.anchor]
        found = [c for s in slots for c in _along(box, w, h, s, gap)]
        return [Candidate(r.translate(dx, dy), a) for r, a in found]

    if isinstance(pos, Anchor2D) and pos.anchor != Anchor2DKind.AUTO:
        return [Candidate(_beside(box, w, h, pos.anchor, gap).translate(dx, dy), pos.anchor.value)]

    ring = list(RING)
    if rt.is_none:
        start = ring.index(Anchor2DKind.DOWN_LEFT)
        ring = ring[start:] + ring[:start]
    found = [(_beside(box, w, h, s, gap), s.value) for s in ring]
    found += [(_beside(box, w, h, s, ring_gap), f"{s.value}@{ring_gap:g}") for s in ring]
    found.append((_beside(box, w, h, Anchor2DKind.CENTER, 0), Anchor2DKind.CENTER.value))
    return [Candidate(r.translate(dx, dy), a) for r, a in found]


@dataclass(frozen=True)
class PlacementRequest:
    """
    One box to place.

    ``pinned`` boxes (fixed positions, wrapping enclosures) are never moved;
    they claim their cells and warn on overlap when ``warn_overlap`` is set.
    """
    annotation_id: str
    size: Tuple[float, float] = (0.0, 0.0)
    target: Optional[ResolvedTarget] = None
    position: Optional[Position] = None
    pinned: Optional[Rect] = None
    warn_overlap: bool = True
    path: str = ""


@dataclass(frozen=True)
class PlacementResult:
    annotation_id: str
    bbox: Rect
    anchor_used: str
    fallback: bool = False


def clamp_to(rect: Rect, canvas: Rect) -> Rect:
    x = min(max(rect.x, canvas.x), max(canvas.x, canvas.right - rect.w))
    y = min(max(rect.y, canvas.y), max(canvas.y, canvas.bottom - rect.h))
    return Rect(x, y, rect.w, rect.h)


class PlacementSearch:
    """Depth-first backtracking over per-request candidate lists."""

    def __init__(self, grid: OccupancyGrid, budget: Optional[int] = None):
        """
        Initialize the search.

        Args:
            grid: Occupancy grid, updated in place with every claim
            budget: Maximum candidate visits before falling back to a greedy pass
        """
        self.grid = grid
        self.budget = budget or settings.placement_budget
        self.visits = 0

    def place_all(self, requests: Sequence[PlacementRequest]) -> List[PlacementResult]:
        results: Dict[int, PlacementResult] = {}
        for i, req in enumerate(requests):
            if req.pinned is not None:
                results[i] = self._pin(req)

        flexible = [i for i, req in enumerate(requests) if req.pinned is None]
        candidates = [
            candidate_anchors(requests[i].target, requests[i].size, requests[i].position)
            for i in flexible
        ]
        choice = self._search([requests[i] for i in flexible], candidates)
        if choice is not None:
            for k, i in enumerate(flexible):
                c = candidates[k][choice[k]]
                results[i] = PlacementResult(requests[i].annotation_id, c.rect, c.anchor)
        else:
            logger.debug(f"Backtracking gave up after {self.visits} visit(s); placing greedily")
            for k, i in enumerate(flexible):
                results[i] = self._greedy(requests[i], candidates[k])
        return [results[i] for i in range(len(requests))]

    def _pin(self, req: PlacementRequest) -> PlacementResult:
        rect = req.pinned
        if req.warn_overlap and self.grid.occluded_cells(rect):
            logger.warning(
                f"Fixed placement of '{req.annotation_id}' overlaps existing content",
                extra=diagnostic("FixedOverlap", req.path),
            )
        self.grid.claim(req.annotation_id, rect)
        return PlacementResult(req.annotation_id, rect, "fixed")

    def _search(
        self, requests: Sequence[PlacementRequest], candidates: Sequence[Sequence[Candidate]]
    ) -> Optional[List[int]]:
        n = len(requests)
        choice = [-1] * n
        i = 0
        while 0 <= i < n:
            req = requests[i]
            if choice[i] >= 0:
                self.grid.release(req.annotation_id)
            j = choice[i] + 1
            while j < len(candidates[i]):
                self.visits += 1
                if self.visits > self.budget:
                    for k in range(i):
                        self.grid.release(requests[k].annotation_id)
                    return None
                if self.grid.is_free(candidates[i][j].rect):
                    break
                j += 1
            if j < len(candidates[i]):
                self.grid.claim(req.annotation_id, candidates[i][j].rect)
                choice[i] = j
                i += 1
            else:
                choice[i] = -1
                i -= 1
        return choice if i == n else None

    def _greedy(self, req: PlacementRequest, candidates: Sequence[Candidate]) -> PlacementResult:
        for c in candidates:
            if self.grid.is_free(c.rect):
                self.grid.claim(req.annotation_id, c.rect)
                return PlacementResult(req.annotation_id, c.rect, c.anchor)

        best: Optional[Tuple[int, Candidate]] = None
        for c in candidates:
            rect = clamp_to(c.rect, self.grid.canvas)
            occlusion = self.grid.occluded_cells(rect)
            if best is None or occlusion < best[0]:
                best = (occlusion, Candidate(rect, c.anchor))
        chosen = best[1]
        logger.warning(
            f"No free space for '{req.annotation_id}'; using the least occluded slot ({chosen.anchor})",
            extra=diagnostic("FallbackPlacement", req.path),
        )
        self.grid.claim(req.annotation_id, chosen.rect)
        return PlacementResult(req.annotation_id, chosen.rect, chosen.anchor, fallback=True)


def place_all(
    requests: Sequence[PlacementRequest], grid: OccupancyGrid, budget: Optional[int] = None
) -> List[PlacementResult]:
    """
    Place annotation boxes without overlap where possible.

    Args:
        requests: Boxes to place, in spec order
        grid: Occupancy grid; claims are recorded in it
        budget: Candidate visit budget for the backtracking search

    Returns:
        One result per request, in request order
    """
    return PlacementSearch(grid, budget).place_all(requests)
