"""Connector routing between boxes and arrowhead construction."""

import math
from typing import List, Sequence, Tuple

import numpy as np

from ..geometry import Point, Polygon, Rect, distance
from ..grammar import Interpolation

ARROW_LENGTH = 8.0
ARROW_HALF_WIDTH = 3.0
CURVE_OFFSET = 12.0
CURVE_SAMPLES = 16


def facing_points(src: Rect, dst: Rect) -> Tuple[Point, Point]:
    """Edge-midpoint pair with the smallest distance; ties keep the first pair found."""
    best = None
    for p in src.edge_midpoints():
        for q in dst.edge_midpoints():
            d = distance(p, q)
            if best is None or d < best[0] - 1e-9:
                best = (d, p, q)
    return best[1], best[2]


def _centripetal_segment(p0, p1, p2, p3, samples: int) -> np.ndarray:
    """Points on the centripetal Catmull-Rom segment between ``p1`` and ``p2``."""
    p0, p1, p2, p3 = (np.asarray(p, dtype=float) for p in (p0, p1, p2, p3))

    def knot(t: float, a: np.ndarray, b: np.ndarray) -> float:
        return t + max(float(np.hypot(*(b - a))), 1e-9) ** 0.5

    t0 = 0.0
    t1 = knot(t0, p0, p1)
    t2 = knot(t1, p1, p2)
    t3 = knot(t2, p2, p3)
    t = np.linspace(t1, t2, samples).reshape(-1, 1)

    a1 = (t1 - t) / (t1 - t0) * p0 + (t - t0) / (t1 - t0) * p1
    a2 = (t2 - t) / (t2 - t1) * p1 + (t - t1) / (t2 - t1) * p2
    a3 = (t3 - t) / (t3 - t2) * p2 + (t - t2) / (t3 - t2) * p3
    b1 = (t2 - t) / (t2 - t0) * a1 + (t - t0) / (t2 - t0) * a2
    b2 = (t3 - t) / (t3 - t1) * a2 + (t - t1) / (t3 - t1) * a3
    return (t2 - t) / (t2 - t1) * b1 + (t - t1) / (t2 - t1) * b2


def catmull_rom(points: Sequence[Point], samples: int = CURVE_SAMPLES) -> List[Point]:
    """
    Sample a centripetal Catmull-Rom spline through ``points``.

    The chain is padded with mirrored end points so the curve passes through
    the first and last point.
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    chain = [2 * pts[0] - pts[1]] + pts + [2 * pts[-1] - pts[-2]]
    out: List[Point] = []
    for i in range(len(chain) - 3):
        segment = _centripetal_segment(chain[i], chain[i + 1], chain[i + 2], chain[i + 3], samples)
        rows = segment if not out else segment[1:]
        out.extend((float(x), float(y)) for x, y in rows)
    out[0] = (float(pts[0][0]), float(pts[0][1]))
    out[-1] = (float(pts[-1][0]), float(pts[-1][1]))
    return out


def route_between(p: Point, q: Point, interp: Interpolation) -> List[Point]:
    """Connector polyline from ``p`` to ``q``."""
    if interp == Interpolation.STEPWISE:
        bend = (q[0], p[1])
        if bend in (p, q):
            return [p, q]
        return [p, bend, q]
    if interp == Interpolation.CATMULL_ROM:
        dx, dy = q[0] - p[0], q[1] - p[1]
        length = math.hypot(dx, dy)
        if length == 0:
            return [p, q]
        mid = ((p[0] + q[0]) / 2 - dy / length * CURVE_OFFSET, (p[1] + q[1]) / 2 + dx / length * CURVE_OFFSET)
        return catmull_rom([p, mid, q])
    return [p, q]


def route_connector(src: Rect, dst: Rect, interp: Interpolation = Interpolation.LINEAR) -> List[Point]:
    """
    Route a connector between two boxes.

    Args:
        src: Source box
        dst: Destination box
        interp: Line style between the facing edge midpoints

    Returns:
        Polyline points; the first lies on ``src`` and the last on ``dst``
    """
    p, q = facing_points(src, dst)
    return route_between(p, q, interp)


def arrowhead(tip: Point, previous: Point, length: float = ARROW_LENGTH, half_width: float = ARROW_HALF_WIDTH) -> Polygon:
    """Filled triangle pointing at ``tip`` along the segment from ``previous``."""
    dx, dy = tip[0] - previous[0], tip[1] - previous[1]
    norm = math.hypot(dx, dy) or 1.0
    ux, uy = dx / norm, dy / norm
    bx, by = tip[0] - ux * length, tip[1] - uy * length
    return Polygon(
        (
            tip,
            (bx - uy * half_width, by + ux * half_width),
            (bx + uy * half_width, by - ux * half_width),
        )
    )


def _last_distinct(points: Sequence[Point], tip: Point) -> Point:
    for p in reversed(points):
        if distance(p, tip) > 1e-6:
            return p
    return (tip[0] - 1.0, tip[1])


def arrowheads(points: Sequence[Point], at_start: bool, at_end: bool) -> List[Polygon]:
    """Arrowheads for the requested ends of a polyline."""
    heads = []
    if at_start and points:
        heads.append(arrowhead(points[0], _last_distinct(list(reversed(points)), points[0])))
    if at_end and points:
        heads.append(arrowhead(points[-1], _last_distinct(points, points[-1])))
    return heads
