"""Bind annotation targets to scene geometry."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..chart import Channel, Scale
from ..data import ColumnType, DataTable, Value, parse_temporal
from ..errors import ChartnotesError, DomainMiss, MissingChartPart, TargetEmpty
from ..expr import Evaluator, parse_expr, select_rows
from ..geometry import Point, Rect, union_rects
from ..grammar import (
    Anchor2DKind,
    AxisTarget,
    ByIdTarget,
    ChartPartTarget,
    DataPointTarget,
    FixedPos,
    FixedTarget,
    NoneTarget,
    Target,
)
from ..scene import SceneGraph
from ..utils import diagnostic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResolvedTarget:
    """
    Concrete geometry behind one or more targets.

    ``nodes`` and ``boxes`` are parallel: scene node ids (or synthetic ids for
    fixed and none targets) and their pixel boxes.
    """
    source: Optional[Target]
    nodes: Tuple[str, ...]
    boxes: Tuple[Rect, ...]

    def __post_init__(self):
        if not self.nodes or len(self.nodes) != len(self.boxes):
            raise ValueError("A resolved target needs matching, non-empty nodes and boxes")

    @property
    def union_bbox(self) -> Rect:
        return union_rects(self.boxes)

    @property
    def is_none(self) -> bool:
        return isinstance(self.source, NoneTarget)

    def anchor_point(self, direction: Anchor2DKind) -> Point:
        """One of the nine anchor points of the union box."""
        b = self.union_bbox
        cx, cy = b.center
        points = {
            Anchor2DKind.UP_LEFT: (b.x, b.y),
            Anchor2DKind.UP: (cx, b.y),
            Anchor2DKind.UP_RIGHT: (b.right, b.y),
            Anchor2DKind.MID_LEFT: (b.x, cy),
            Anchor2DKind.CENTER: (cx, cy),
            Anchor2DKind.AUTO: (cx, cy),
            Anchor2DKind.MID_RIGHT: (b.right, cy),
            Anchor2DKind.DOWN_LEFT: (b.x, b.bottom),
            Anchor2DKind.DOWN: (cx, b.bottom),
            Anchor2DKind.DOWN_RIGHT: (b.right, b.bottom),
        }
        return points[direction]


def merge_targets(resolved: Sequence[ResolvedTarget]) -> ResolvedTarget:
    """Combine the targets of one annotation root, dropping repeated nodes."""
    nodes: List[str] = []
    boxes: List[Rect] = []
    for rt in resolved:
        for node_id, box in zip(rt.nodes, rt.boxes):
            if node_id not in nodes:
                nodes.append(node_id)
                boxes.append(box)
    source = resolved[0].source if len(resolved) == 1 else None
    return ResolvedTarget(source=source, nodes=tuple(nodes), boxes=tuple(boxes))


def _coerce(scale: Scale, v: Value, what: str) -> Value:
    if scale.value_type == ColumnType.TEMPORAL and isinstance(v, str):
        ms = parse_temporal(v)
        if ms is None:
            raise DomainMiss(f"{what} '{v}' is not an ISO-8601 date")
        return ms
    if isinstance(v, int) and not isinstance(v, bool) and scale.value_type == ColumnType.NUMBER:
        return float(v)
    return v


def map_fixed(fp: FixedPos, scales: Dict[Channel, Scale], plot: Rect) -> Point:
    """
    Map a fixed point to canvas pixels.

    Args:
        fp: Fixed point in data or plot-area pixel space
        scales: Positional scales
        plot: Plot-area box

    Returns:
        Canvas pixel point

    Raises:
        DomainMiss: A data coordinate lies outside its scale's domain
    """
    if fp.space == "pixel":
        return (plot.x + float(fp.x), plot.y + float(fp.y))
    point = []
    for channel, raw in ((Channel.X, fp.x), (Channel.Y, fp.y)):
        scale = scales[channel]
        v = _coerce(scale, raw, f"{channel.value} coordinate")
        if not scale.contains(v):
            raise DomainMiss(f"{channel.value} coordinate {raw!r} is outside the scale domain")
        point.append(scale.apply(v))
    return (point[0], point[1])


class TargetResolver:
    """Resolves concrete targets against one compiled chart."""

    def __init__(self, scene: SceneGraph, data: DataTable, scales: Dict[Channel, Scale]):
        """
        Initialize the resolver.

        Args:
            scene: Scene graph built from ``data``
            data: Bound table
            scales: Positional scales used to build the scene
        """
        self.scene = scene
        self.data = data
        self.scales = scales

    def resolve(
        self, t: Target, root_index: int = 0, target_index: int = 0
    ) -> Optional[ResolvedTarget]:
        """
        Resolve one target.

        Args:
            t: Target to resolve
            root_index: Index of the owning annotation root
            target_index: Index of the target within the root

        Returns:
            Resolved geometry, or None for id targets (bound later by the assembler)

        Raises:
            TargetEmpty, MissingChartPart, DomainMiss: with a JSON pointer to the target
        """
        path = f"/annotations/{root_index}/targets/{target_index}"
        try:
            resolved = self._resolve(t, root_index, target_index)
        except ChartnotesError as e:
            e.path = e.path or path
            raise
        if resolved is not None:
            logger.debug(f"{path} resolved to {len(resolved.nodes)} node(s)")
        return resolved

    def _resolve(self, t: Target, root_index: int, target_index: int) -> Optional[ResolvedTarget]:
        if isinstance(t, ByIdTarget):
            return None
        if isinstance(t, NoneTarget):
            plot = self.scene.plot_area
            return ResolvedTarget(t, (f"none/{root_index}",), (Rect(plot.right, plot.y, 0, 0),))
        if isinstance(t, FixedTarget):
            x, y = map_fixed(t.at, self.scales, self.scene.plot_area)
            return ResolvedTarget(t, (f"fixed/{root_index}/{target_index}",), (Rect(x, y, 0, 0),))
        if isinstance(t, ChartPartTarget):
            node = self.scene.chart_part(t.part)
            if node is None:
                raise MissingChartPart(f"The chart has no {t.part.value}")
            return ResolvedTarget(t, (node.id,), (node.bbox,))
        if isinstance(t, DataPointTarget):
            return self._data_point(t, f"/annotations/{root_index}/targets/{target_index}")
        return self._axis(t)

    def _data_point(self, t: DataPointTarget, path: str) -> ResolvedTarget:
        if t.expr is not None:
            rows: Sequence[int] = select_rows(parse_expr(t.expr, self.data.schema), self.data)
        else:
            missing = [i for i in t.indices if i >= self.data.row_count]
            if missing:
                logger.warning(
                    f"dataPoint indices {missing} are past the last row ({self.data.row_count - 1})",
                    extra=diagnostic("IndexOutOfRange", f"{path}/dataPoint"),
                )
            rows = [i for i in t.indices if i < self.data.row_count]
        nodes = [self.scene.mark_for_row(r) for r in rows]
        nodes = [n for n in nodes if n is not None]
        if not nodes:
            raise TargetEmpty("The dataPoint target selects no drawn marks")
        return ResolvedTarget(t, tuple(n.id for n in nodes), tuple(n.bbox for n in nodes))

    def _axis(self, t: AxisTarget) -> ResolvedTarget:
        nodes = self.scene.axis_parts(t.axis, t.parts)
        if t.range is not None:
            keep = self._range_filter(t)
            nodes = [n for n in nodes if n.tag.value is not None and keep(n.tag.value)]
        if not nodes:
            raise TargetEmpty(f"No {t.axis} axis parts match the target")
        return ResolvedTarget(t, tuple(n.id for n in nodes), tuple(n.bbox for n in nodes))

    def _range_filter(self, t: AxisTarget):
        scale = self.scales[Channel(t.axis)]
        if isinstance(t.range, str):
            schema = {**self.data.schema, "value": scale.value_type}
            parsed = parse_expr(t.range, schema)

            def keep_expr(v: Value) -> bool:
                return bool(Evaluator(self.data, {"value": v}).evaluate(parsed.root, None))

            return keep_expr

        lo, hi = (_coerce(scale, b, "range bound") for b in t.range)
        if scale.continuous:
            if isinstance(lo, str) or isinstance(hi, str):
                raise DomainMiss(f"Range bounds {list(t.range)} do not fit the {t.axis} scale")
            lo, hi = min(lo, hi), max(lo, hi)
            return lambda v: lo <= v <= hi
        i, j = sorted((scale.index(lo), scale.index(hi)))
        return lambda v: scale.contains(v) and i <= scale.index(v) <= j


def resolve_target(
    t: Target,
    scene: SceneGraph,
    data: DataTable,
    scales: Dict[Channel, Scale],
    root_index: int = 0,
    target_index: int = 0,
) -> Optional[ResolvedTarget]:
    """Resolve one target; see ``TargetResolver.resolve``."""
    return TargetResolver(scene, data, scales).resolve(t, root_index, target_index)
