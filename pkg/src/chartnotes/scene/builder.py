"""Compile a chart spec and its data into a scene graph."""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from ..chart import (
    PALETTE,
    Channel,
    ChartSpec,
    Mark,
    Scale,
    ScaleKind,
    color_domain,
    color_for,
    surviving_rows,
    value_channel,
)
from ..config import settings
from ..data import DataTable, Value, display_value
from ..geometry import Circle, Line, Point, Polygon, Polyline, Rect, RectShape, TextRun
from ..utils import diagnostic
from .graph import (
    INVISIBLE,
    AxisPart,
    AxisPartKind,
    Canvas,
    ChartPart,
    ChartPartKind,
    Group,
    MarkTag,
    Paint,
    PlotArea,
    SceneGraph,
    SceneNode,
    Series,
    container,
    leaf,
)
from .text import measure_text
from .ticks import format_tick, tick_positions

logger = logging.getLogger(__name__)

TEXT_COLOR = "#333333"
GRID_COLOR = "#dddddd"
TICK_SIZE = 5
TICK_FONT = 10
LABEL_FONT = 11
TITLE_FONT = 14
SUBTITLE_FONT = 11
CAPTION_FONT = 10
POINT_RADIUS = 3
VERTEX_BOX = 6
BAR_THICKNESS = 8
LEGEND_ROW = 16
SWATCH = 10

AXIS_PAINT = Paint(stroke=TEXT_COLOR, stroke_width=1)
GRID_PAINT = Paint(stroke=GRID_COLOR, stroke_width=1)


def text_paint(size: float, weight: str = "normal") -> Paint:
    return Paint(fill=TEXT_COLOR, font_size=size, font_weight=weight)


def text_run(
    x: float, baseline: float, text: str, size: float, anchor: str = "start", rotate: float = 0.0
) -> TextRun:
    """Measured text run whose first baseline is at ``baseline``."""
    width, _ = measure_text(text, size)
    return TextRun(
        x=x,
        y=baseline,
        lines=tuple(text.split("\n")),
        font_size=size,
        width=width,
        anchor=anchor,
        rotate=rotate,
    )


def _baseline(scale: Scale) -> float:
    if scale.kind == ScaleKind.LINEAR:
        d0, d1 = scale.domain
        return scale.apply(min(max(0.0, d0), d1))
    return scale.range[0]


def _value_extent(scale: Scale, v: Value) -> Tuple[float, float]:
    """(start, length) of a bar along its value axis."""
    if not scale.continuous:
        return _category_span(scale, v)
    p = scale.apply(v)
    base = _baseline(scale)
    return min(p, base), abs(p - base)


def _category_span(scale: Scale, v: Value) -> Tuple[float, float]:
    """(start, length) of a bar across its category axis."""
    if scale.kind == ScaleKind.BAND:
        return scale.band_start(v), scale.bandwidth
    return scale.apply(v) - BAR_THICKNESS / 2, BAR_THICKNESS


class SceneBuilder:
    """Builds the scene tree for one chart."""

    def __init__(
        self,
        spec: ChartSpec,
        data: DataTable,
        scales: Dict[Channel, Scale],
        tick_count: Optional[int] = None,
    ):
        """
        Initialize the builder.

        Args:
            spec: Validated chart spec
            data: Bound table
            scales: Output of infer_scales
            tick_count: Target tick count per axis
        """
        self.spec = spec
        self.data = data
        self.scales = scales
        self.tick_count = tick_count or settings.tick_count
        self.plot = spec.plot_area()
        self.rows = surviving_rows(spec, data)
        self.colors = color_domain(spec, data)

    def _value(self, row: int, channel: Channel) -> Value:
        return self.data.value(row, self.spec.encoding[channel].field)

    def _color(self, row: int) -> str:
        enc = self.spec.channel(Channel.COLOR)
        if enc is None:
            return PALETTE[0]
        return color_for(self.colors, self.data.value(row, enc.field))

    def _pixel(self, row: int) -> Point:
        x = self.scales[Channel.X].apply(self._value(row, Channel.X))
        y = self.scales[Channel.Y].apply(self._value(row, Channel.Y))
        return (x, y)

    def build(self) -> SceneGraph:
        dropped = self.data.row_count - len(self.rows)
        if dropped:
            logger.warning(
                f"Dropped {dropped} row(s) with a null encoded field",
                extra=diagnostic("NullDropped", "/data"),
            )
        xs, ys = self.scales[Channel.X], self.scales[Channel.Y]
        x_ticks = tick_positions(xs, self.tick_count)
        y_ticks = tick_positions(ys, self.tick_count)

        children: List[SceneNode] = [
            leaf("plot", PlotArea(), RectShape(self.plot.x, self.plot.y, self.plot.w, self.plot.h))
        ]
        children.append(self._grid(x_ticks, y_ticks))
        children.append(self._marks())
        children.append(self._x_axis(xs, x_ticks))
        children.append(self._y_axis(ys, y_ticks))
        children.extend(self._chart_parts())

        root = container("root", Canvas(), children, base=Rect(0, 0, self.spec.width, self.spec.height))
        scene = SceneGraph(root=root, width=self.spec.width, height=self.spec.height)
        logger.debug(f"Built scene with {len(self.rows)} marks")
        return scene

    # Marks

    def _marks(self) -> SceneNode:
        mark = self.spec.mark
        if mark == Mark.BAR:
            nodes = [self._bar(row) for row in self.rows]
        elif mark == Mark.POINT:
            nodes = []
            for row in self.rows:
                x, y = self._pixel(row)
                nodes.append(
                    leaf(f"mark/{row}", MarkTag(row), Circle(x, y, POINT_RADIUS), Paint(fill=self._color(row)))
                )
        else:
            nodes = self._series_marks()
        return container("marks", Group("marks"), nodes, base=self.plot)

    def _bar(self, row: int) -> SceneNode:
        xs, ys = self.scales[Channel.X], self.scales[Channel.Y]
        xv, yv = self._value(row, Channel.X), self._value(row, Channel.Y)
        if value_channel(self.spec) == Channel.Y:
            x0, w = _category_span(xs, xv)
            y0, h = _value_extent(ys, yv)
        else:
            x0, w = _value_extent(xs, xv)
            y0, h = _category_span(ys, yv)
        return leaf(f"mark/{row}", MarkTag(row), RectShape(x0, y0, w, h), Paint(fill=self._color(row)))

    def _series_groups(self) -> List[List[int]]:
        enc = self.spec.channel(Channel.COLOR)
        if enc is None:
            return [list(self.rows)] if self.rows else []
        groups = []
        for value in self.colors:
            members = [r for r in self.rows if self.data.value(r, enc.field) == value]
            if members:
                groups.append(members)
        return groups

    def _series_marks(self) -> List[SceneNode]:
        vertical = value_channel(self.spec) == Channel.Y
        series_nodes: List[SceneNode] = []
        vertex_nodes: List[SceneNode] = []
        for k, members in enumerate(self._series_groups()):
            order = sorted(members, key=lambda r: (self._pixel(r)[0 if vertical else 1], r))
            points = [self._pixel(r) for r in order]
            color = self._color(order[0])
            tag = Series(index=k, rows=tuple(order))
            if self.spec.mark == Mark.LINE:
                node = leaf(
                    f"mark/series/{k}", tag, Polyline(tuple(points)), Paint(stroke=color, stroke_width=2)
                )
            else:
                if vertical:
                    base = _baseline(self.scales[Channel.Y])
                    closing = [(points[-1][0], base), (points[0][0], base)]
                else:
                    base = _baseline(self.scales[Channel.X])
                    closing = [(base, points[-1][1]), (base, points[0][1])]
                node = leaf(
                    f"mark/series/{k}",
                    tag,
                    Polygon(tuple(points + closing)),
                    Paint(stroke=color, stroke_width=1, fill=color, opacity=0.7),
                )
            series_nodes.append(node)
            for row, (x, y) in zip(order, points):
                box = RectShape(x - VERTEX_BOX / 2, y - VERTEX_BOX / 2, VERTEX_BOX, VERTEX_BOX)
                vertex_nodes.append(leaf(f"mark/{row}", MarkTag(row), box, INVISIBLE))
        vertex_nodes.sort(key=lambda n: n.tag.row_index)
        return series_nodes + vertex_nodes

    # Guides

    def _grid(self, x_ticks: Sequence[Tuple[Value, float]], y_ticks: Sequence[Tuple[Value, float]]) -> SceneNode:
        p = self.plot
        nodes = [
            leaf(f"axis/x/grid/{i}", AxisPart("x", AxisPartKind.GRID, v), Line(px, p.y, px, p.bottom), GRID_PAINT)
            for i, (v, px) in enumerate(x_ticks)
        ]
        nodes += [
            leaf(f"axis/y/grid/{i}", AxisPart("y", AxisPartKind.GRID, v), Line(p.x, py, p.right, py), GRID_PAINT)
            for i, (v, py) in enumerate(y_ticks)
        ]
        return container("grid", Group("grid"), nodes, base=p)

    def _x_axis(self, scale: Scale, ticks: Sequence[Tuple[Value, float]]) -> SceneNode:
        p = self.plot
        nodes = [
            leaf("axis/x/domain", AxisPart("x", AxisPartKind.DOMAIN), Line(p.x, p.bottom, p.right, p.bottom), AXIS_PAINT)
        ]
        for i, (v, px) in enumerate(ticks):
            nodes.append(
                leaf(
                    f"axis/x/tick/{i}",
                    AxisPart("x", AxisPartKind.TICK, v),
                    Line(px, p.bottom, px, p.bottom + TICK_SIZE),
                    AXIS_PAINT,
                )
            )
            nodes.append(
                leaf(
                    f"axis/x/tick-label/{i}",
                    AxisPart("x", AxisPartKind.TICK_LABEL, v),
                    text_run(px, p.bottom + TICK_SIZE + 13, format_tick(v, scale), TICK_FONT, "middle"),
                    text_paint(TICK_FONT),
                )
            )
        title = self.spec.encoding[Channel.X].field
        nodes.append(
            leaf(
                "axis/x/label",
                AxisPart("x", AxisPartKind.LABEL),
                text_run(p.center[0], p.bottom + 34, title, LABEL_FONT, "middle"),
                text_paint(LABEL_FONT),
            )
        )
        return container("axis/x", Group("axis"), nodes)

    def _y_axis(self, scale: Scale, ticks: Sequence[Tuple[Value, float]]) -> SceneNode:
        p = self.plot
        nodes = [
            leaf("axis/y/domain", AxisPart("y", AxisPartKind.DOMAIN), Line(p.x, p.y, p.x, p.bottom), AXIS_PAINT)
        ]
        for i, (v, py) in enumerate(ticks):
            nodes.append(
                leaf(
                    f"axis/y/tick/{i}",
                    AxisPart("y", AxisPartKind.TICK, v),
                    Line(p.x - TICK_SIZE, py, p.x, py),
                    AXIS_PAINT,
                )
            )
            nodes.append(
                leaf(
                    f"axis/y/tick-label/{i}",
                    AxisPart("y", AxisPartKind.TICK_LABEL, v),
                    text_run(p.x - TICK_SIZE - 2, py + 3.5, format_tick(v, scale), TICK_FONT, "end"),
                    text_paint(TICK_FONT),
                )
            )
        title = self.spec.encoding[Channel.Y].field
        nodes.append(
            leaf(
                "axis/y/label",
                AxisPart("y", AxisPartKind.LABEL),
                text_run(14, p.center[1], title, LABEL_FONT, "middle", rotate=-90),
                text_paint(LABEL_FONT),
            )
        )
        return container("axis/y", Group("axis"), nodes)

    def _chart_parts(self) -> List[SceneNode]:
        spec, p = self.spec, self.plot
        nodes = []
        if spec.title:
            nodes.append(
                leaf(
                    "chart/title",
                    ChartPart(ChartPartKind.TITLE),
                    text_run(spec.width / 2, 22, spec.title, TITLE_FONT, "middle"),
                    text_paint(TITLE_FONT, "bold"),
                )
            )
        if spec.subtitle:
            nodes.append(
                leaf(
                    "chart/subtitle",
                    ChartPart(ChartPartKind.SUBTITLE),
                    text_run(spec.width / 2, 36, spec.subtitle, SUBTITLE_FONT, "middle"),
                    text_paint(SUBTITLE_FONT),
                )
            )
        if spec.caption:
            nodes.append(
                leaf(
                    "chart/caption",
                    ChartPart(ChartPartKind.CAPTION),
                    text_run(p.x, spec.height - 8, spec.caption, CAPTION_FONT),
                    text_paint(CAPTION_FONT),
                )
            )
        if spec.has_legend:
            nodes.append(self._legend())
        return nodes

    def _legend(self) -> SceneNode:
        p = self.plot
        enc = self.spec.encoding[Channel.COLOR]
        column_type = self.data.column_type(enc.field)
        x0 = p.right + 12
        entries = []
        for i, value in enumerate(self.colors):
            top = p.y + i * LEGEND_ROW
            entries.append(
                leaf(
                    f"chart/legend/swatch/{i}",
                    Group("legend-swatch"),
                    RectShape(x0, top, SWATCH, SWATCH),
                    Paint(fill=PALETTE[i % len(PALETTE)]),
                )
            )
            entries.append(
                leaf(
                    f"chart/legend/label/{i}",
                    Group("legend-label"),
                    text_run(x0 + SWATCH + 4, top + 9, display_value(value, column_type), TICK_FONT),
                    text_paint(TICK_FONT),
                )
            )
        base = Rect(x0, p.y, SWATCH, SWATCH)
        return container("chart/legend", ChartPart(ChartPartKind.LEGEND), entries, base=base)


def build_scene(
    spec: ChartSpec,
    data: DataTable,
    scales: Dict[Channel, Scale],
    tick_count: Optional[int] = None,
) -> SceneGraph:
    """
    Compile a chart into its scene graph.

    Args:
        spec: Validated chart spec
        data: Bound table
        scales: Positional scales from infer_scales
        tick_count: Target tick count per axis

    Returns:
        Scene graph with stable node ids
    """
    return SceneBuilder(spec, data, scales, tick_count).build()
