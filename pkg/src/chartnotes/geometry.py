"""Pixel-space geometry shared by the scene, layout and render stages.

Coordinates follow SVG: origin top-left, y grows downward.
"""

import math
import re
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple, Union

Point = Tuple[float, float]


@dataclass(frozen=True)
class Rect:
    """Axis-aligned box in pixels."""
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if self.w < 0 or self.h < 0:
            raise ValueError(f"Rect size must be non-negative, got {self.w}x{self.h}")

    @property
    def right(self) -> float:
        return self.x + self.w

    @property
    def bottom(self) -> float:
        return self.y + self.h

    @property
    def center(self) -> Point:
        return (self.x + self.w / 2, self.y + self.h / 2)

    def inflate(self, d: float) -> "Rect":
        """Grow the box by ``d`` on every side (shrinks toward the centre for negative ``d``)."""
        w = max(0.0, self.w + 2 * d)
        h = max(0.0, self.h + 2 * d)
        cx, cy = self.center
        return Rect(cx - w / 2, cy - h / 2, w, h)

    def translate(self, dx: float, dy: float) -> "Rect":
        return Rect(self.x + dx, self.y + dy, self.w, self.h)

    def contains(self, other: "Rect", tol: float = 1e-6) -> bool:
        return (
            other.x >= self.x - tol
            and other.y >= self.y - tol
            and other.right <= self.right + tol
            and other.bottom <= self.bottom + tol
        )

    def contains_point(self, p: Point, tol: float = 1e-6) -> bool:
        return (
            self.x - tol <= p[0] <= self.right + tol
            and self.y - tol <= p[1] <= self.bottom + tol
        )

    def intersects(self, other: "Rect") -> bool:
        """True when the interiors overlap; touching edges do not count."""
        return (
            self.x < other.right
            and other.x < self.right
            and self.y < other.bottom
            and other.y < self.bottom
        )

    def edge_midpoints(self) -> Tuple[Point, Point, Point, Point]:
        """Midpoints of the top, right, bottom and left edges."""
        cx, cy = self.center
        return ((cx, self.y), (self.right, cy), (cx, self.bottom), (self.x, cy))

    @staticmethod
    def from_points(points: Iterable[Point]) -> "Rect":
        pts = list(points)
        if not pts:
            raise ValueError("Rect.from_points needs at least one point")
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return Rect(min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))


def union_rects(rects: Iterable[Rect]) -> Rect:
    """Minimal box covering every input box."""
    items = list(rects)
    if not items:
        raise ValueError("union_rects needs at least one rect")
    x0 = min(r.x for r in items)
    y0 = min(r.y for r in items)
    x1 = max(r.right for r in items)
    y1 = max(r.bottom for r in items)
    return Rect(x0, y0, x1 - x0, y1 - y0)


def distance(a: Point, b: Point) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


# Shape primitives. Each knows its own bounding box.

@dataclass(frozen=True)
class RectShape:
    x: float
    y: float
    w: float
    h: float

    def bbox(self) -> Rect:
        return Rect(self.x, self.y, self.w, self.h)


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float

    def bbox(self) -> Rect:
        return Rect(self.cx - self.r, self.cy - self.r, 2 * self.r, 2 * self.r)


@dataclass(frozen=True)
class Ellipse:
    cx: float
    cy: float
    rx: float
    ry: float

    def bbox(self) -> Rect:
        return Rect(self.cx - self.rx, self.cy - self.ry, 2 * self.rx, 2 * self.ry)


@dataclass(frozen=True)
class Line:
    x1: float
    y1: float
    x2: float
    y2: float

    def bbox(self) -> Rect:
        return Rect.from_points([(self.x1, self.y1), (self.x2, self.y2)])


@dataclass(frozen=True)
class Polyline:
    points: Tuple[Point, ...]

    def bbox(self) -> Rect:
        return Rect.from_points(self.points)


@dataclass(frozen=True)
class Polygon:
    """Closed path through ``points``; drawn as an SVG path."""
    points: Tuple[Point, ...]

    def bbox(self) -> Rect:
        return Rect.from_points(self.points)


@dataclass(frozen=True)
class SvgPath:
    """Author-supplied path data laid into ``box`` (unit-square coordinates) or drawn verbatim."""
    d: str
    box: Optional[Rect] = None

    def bbox(self) -> Rect:
        return self.box if self.box is not None else Rect(0, 0, 0, 0)


@dataclass(frozen=True)
class TextRun:
    """One or more lines of text; ``y`` is the first baseline."""
    x: float
    y: float
    lines: Tuple[str, ...]
    font_size: float
    width: float
    anchor: str = "start"
    rotate: float = 0.0

    @property
    def line_height(self) -> float:
        return 1.2 * self.font_size

    def bbox(self) -> Rect:
        height = self.line_height * max(1, len(self.lines))
        if self.anchor == "middle":
            left = self.x - self.width / 2
        elif self.anchor == "end":
            left = self.x - self.width
        else:
            left = self.x
        box = Rect(left, self.y - self.font_size, self.width, height)
        if self.rotate in (-90.0, 90.0, 270.0):
            cx, cy = self.x, self.y
            return Rect(cx - height / 2, cy - self.width / 2, height, self.width)
        return box


Shape = Union[RectShape, Circle, Ellipse, Line, Polyline, Polygon, SvgPath, TextRun]


PATH_TOKEN = re.compile(
    r"\s*,?\s*([MmLlHhVvCcSsQqTtAaZz]|[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
)
PATH_ARITY = {"M": 2, "L": 2, "H": 1, "V": 1, "C": 6, "S": 4, "Q": 4, "T": 2, "A": 7, "Z": 0}


def parse_path_data(d: str) -> List[Tuple[str, List[float]]]:
    """
    Tokenise SVG path data into (command, arguments) segments.

    Implicit repeats are expanded, so every segment carries exactly one
    command's worth of numbers.

    Raises:
        ValueError: Malformed path data
    """
    tokens: List[str] = []
    pos = 0
    text = d.strip()
    while pos < len(text):
        match = PATH_TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise ValueError(f"Invalid path data at offset {pos}: {d!r}")
        tokens.append(match.group(1))
        pos = match.end()
        while pos < len(text) and text[pos] in " \t\r\n,":
            pos += 1
    if not tokens or tokens[0] not in "Mm":
        raise ValueError(f"Path data must start with a moveto: {d!r}")

    segments: List[Tuple[str, List[float]]] = []
    i = 0
    while i < len(tokens):
        command = tokens[i]
        if not command.isalpha():
            raise ValueError(f"Expected a path command, got {command!r}")
        i += 1
        arity = PATH_ARITY[command.upper()]
        numbers: List[float] = []
        while i < len(tokens) and not tokens[i].isalpha():
            numbers.append(float(tokens[i]))
            i += 1
        if arity == 0:
            if numbers:
                raise ValueError("closepath takes no arguments")
            segments.append((command, []))
            continue
        if not numbers or len(numbers) % arity:
            raise ValueError(f"Command {command} expects multiples of {arity} numbers")
        for k in range(0, len(numbers), arity):
            # Extra coordinate pairs after a moveto are implicit linetos.
            repeat = command if k == 0 or command not in "Mm" else ("L" if command == "M" else "l")
            segments.append((repeat, numbers[k:k + arity]))
    return segments


def path_points(d: str) -> List[Point]:
    """Absolute end and control points of a path, in drawing order."""
    points: List[Point] = []
    cx = cy = 0.0
    sx = sy = 0.0
    for command, args in parse_path_data(d):
        upper = command.upper()
        relative = command.islower()
        if upper == "Z":
            cx, cy = sx, sy
            points.append((cx, cy))
            continue
        if upper == "H":
            cx = cx + args[0] if relative else args[0]
            points.append((cx, cy))
            continue
        if upper == "V":
            cy = cy + args[0] if relative else args[0]
            points.append((cx, cy))
            continue
        pairs = [(args[k], args[k + 1]) for k in range(0, len(args), 2)]
        if upper == "A":
            pairs = [(args[5], args[6])]
        ox, oy = (cx, cy) if relative else (0.0, 0.0)
        for px, py in pairs:
            points.append((ox + px, oy + py))
        cx, cy = points[-1]
        if upper == "M":
            sx, sy = cx, cy
    return points
