"""Assemble placed effects into final annotation geometry.

Roots, references and composites are finalized in rounds. A round only sees
boxes finalized by earlier rounds, so id targets and references bind one level
of dependency per round until everything is resolved.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..chart import Channel, Scale
from ..config import settings
from ..data import ColumnType, Value, parse_temporal
from ..errors import (
    ChartnotesError,
    CycleUnresolved,
    DomainMiss,
    DuplicateId,
    ExprTypeError,
    NullOperand,
    TargetEmpty,
    UnresolvedReference,
)
from ..expr import Evaluator, ParsedExpr, eval_constant, parse_expr, select_rows
from ..geometry import (
    Ellipse,
    Point,
    Polygon,
    Polyline,
    Rect,
    RectShape,
    Shape,
    SvgPath,
    TextRun,
    path_points,
    union_rects,
)
from ..grammar import (
    Annotation,
    AnnotationRoot,
    ByIdTarget,
    ConnectorAnn,
    EffectKind,
    EnclosureAnn,
    FixedPosition,
    IndicatorAnn,
    IndicatorKind,
    ReferenceEnsemble,
    ShapeKind,
    Spec,
    Style,
    TextAnchor,
    TextAnn,
)
from ..scene import AnnotationNode, Canvas, Group, Paint, SceneGraph, SceneNode, container, leaf, measure_text
from ..utils import diagnostic
from .placement import OccupancyGrid, PlacementRequest, PlacementResult, place_all
from .resolver import ResolvedTarget, TargetResolver, map_fixed, merge_targets
from .routing import arrowheads, route_connector

logger = logging.getLogger(__name__)

BRACKET_TICK = 6.0
AREA_OPACITY = 0.2


@dataclass(frozen=True)
class ResolvedAnnotation:
    """Final pixel geometry of one effect."""
    id: str
    kind: EffectKind
    geometry: Tuple[Shape, ...]
    style: Style
    bbox: Rect
    root_index: Optional[int] = None
    markers: Tuple[Polygon, ...] = ()
    links: Tuple[Tuple[str, str], ...] = ()
    placement: Optional[PlacementResult] = None


def _anchor_shift(anchor: TextAnchor) -> float:
    return {TextAnchor.START: 0.0, TextAnchor.MIDDLE: 0.5, TextAnchor.END: 1.0}[anchor]


def _polylines_bbox(lines: Sequence[Sequence[Point]]) -> Rect:
    return Rect.from_points(p for line in lines for p in line)


class Assembler:
    """Runs the assembly rounds for one spec over one compiled chart."""

    def __init__(
        self,
        spec: Spec,
        scene: SceneGraph,
        scales: Dict[Channel, Scale],
        grid: OccupancyGrid,
        budget: Optional[int] = None,
        round_limit: Optional[int] = None,
    ):
        """
        Initialize the assembler.

        Args:
            spec: Parsed spec
            scene: Scene compiled from the spec's chart and data
            scales: Positional scales of the scene
            grid: Occupancy grid of the scene; placements claim cells in it
            budget: Placement search budget
            round_limit: Maximum number of assembly rounds
        """
        self.spec = spec
        self.scene = scene
        self.scales = scales
        self.grid = grid
        self.table = spec.table
        self.budget = budget
        self.round_limit = round_limit or settings.assembly_round_limit
        self.resolver = TargetResolver(scene, spec.table, scales)
        self.rounds = 0
        self.boxes: Dict[str, Rect] = {}
        self.results: Dict[str, ResolvedAnnotation] = {}
        self.links: List[Tuple[str, str]] = []
        self.known_ids: Set[str] = set(spec.effect_ids()) | set(spec.composites())
        self.known_ids |= {
            e.connector.id for e in spec.ensembles if getattr(e, "connector", None) is not None
        }
        self._check_scene_collisions()

    def _check_scene_collisions(self) -> None:
        for i, root in enumerate(self.spec.annotations):
            for kind, ann in root.effects():
                if ann.id in self.scene:
                    raise DuplicateId(
                        f"Id '{ann.id}' is already a chart element id",
                        path=f"/annotations/{i}/{kind.value}/id",
                    )
        for k, ensemble in enumerate(self.spec.ensembles):
            ensemble_id = getattr(ensemble, "id", None)
            if ensemble_id is not None and ensemble_id in self.scene:
                raise DuplicateId(f"Id '{ensemble_id}' is already a chart element id", path=f"/ensembles/{k}/id")

    # Rounds

    def assemble(self) -> List[ResolvedAnnotation]:
        """
        Finalize every effect.

        Returns:
            Annotations in paint order: roots in spec order (enclosure,
            connector, indicator, text within a root), then reference connectors

        Raises:
            UnresolvedReference: An id names no effect, composite or chart element
            CycleUnresolved: Rounds stopped making progress or hit the round limit
        """
        roots = self.spec.annotations
        concrete = [
            [self.resolver.resolve(t, i, j) for j, t in enumerate(root.targets)]
            for i, root in enumerate(roots)
        ]
        composites = self.spec.composites()
        pending_roots = list(range(len(roots)))
        pending_refs = [k for k, e in enumerate(self.spec.ensembles) if isinstance(e, ReferenceEnsemble)]
        pending_composites = sorted(composites)

        while pending_roots or pending_refs or pending_composites:
            if self.rounds >= self.round_limit:
                self._fail(pending_roots, pending_refs, pending_composites, limit_hit=True)
            self.rounds += 1
            known = dict(self.boxes)

            ready = []
            for i in pending_roots:
                bound = self._bind(i, concrete[i], known)
                if bound is not None:
                    ready.append((i, bound))
            refs = [
                k for k in pending_refs
                if self.spec.ensembles[k].from_id in known and self.spec.ensembles[k].to_id in known
            ]
            groups = [c for c in pending_composites if all(m in known for m in composites[c].members)]
            if not (ready or refs or groups):
                self._fail(pending_roots, pending_refs, pending_composites, limit_hit=False)

            self._finalize_roots(ready)
            for k in refs:
                self._finalize_reference(k, known)
            for c in groups:
                self.boxes[c] = union_rects(known[m] for m in composites[c].members)

            done = {i for i, _ in ready}
            pending_roots = [i for i in pending_roots if i not in done]
            pending_refs = [k for k in pending_refs if k not in refs]
            pending_composites = [c for c in pending_composites if c not in groups]
            logger.debug(
                f"Assembly round {self.rounds}: {len(ready)} root(s), {len(refs)} reference(s), "
                f"{len(groups)} composite(s) finalized"
            )
        return self._ordered()

    def _bind(
        self, index: int, concrete: Sequence[Optional[ResolvedTarget]], known: Dict[str, Rect]
    ) -> Optional[List[ResolvedTarget]]:
        bound = []
        for t, rt in zip(self.spec.annotations[index].targets, concrete):
            if rt is not None:
                bound.append(rt)
            elif t.id in known:
                bound.append(ResolvedTarget(t, (t.id,), (known[t.id],)))
            elif t.id not in self.known_ids and t.id in self.scene:
                bound.append(ResolvedTarget(t, (t.id,), (self.scene.get(t.id).bbox,)))
            else:
                return None
        return bound

    def _fail(self, roots: List[int], refs: List[int], composites: List[str], limit_hit: bool) -> None:
        for i in roots:
            for j, t in enumerate(self.spec.annotations[i].targets):
                if isinstance(t, ByIdTarget) and t.id not in self.known_ids and t.id not in self.scene:
                    raise UnresolvedReference(
                        f"No effect, composite or chart element has id '{t.id}'",
                        path=f"/annotations/{i}/targets/{j}/id",
                    )
        for k in refs:
            ensemble = self.spec.ensembles[k]
            for key, ref in (("from", ensemble.from_id), ("to", ensemble.to_id)):
                if ref not in self.known_ids:
                    raise UnresolvedReference(f"No effect or composite has id '{ref}'", path=f"/ensembles/{k}/{key}")
        by_id = {e.id: k for k, e in enumerate(self.spec.ensembles) if hasattr(e, "members")}
        for c in composites:
            for m, member in enumerate(self.spec.composites()[c].members):
                if member not in self.known_ids:
                    raise UnresolvedReference(
                        f"Composite member '{member}' is not an effect or composite id",
                        path=f"/ensembles/{by_id[c]}/members/{m}",
                    )
        where = f"/annotations/{roots[0]}" if roots else (f"/ensembles/{refs[0]}" if refs else f"/ensembles/{by_id[composites[0]]}")
        reason = f"round limit {self.round_limit} reached" if limit_hit else "no progress possible"
        raise CycleUnresolved(f"Annotations still depend on each other after {self.rounds} round(s): {reason}", path=where)

    # Roots

    def _finalize_roots(self, ready: Sequence[Tuple[int, List[ResolvedTarget]]]) -> None:
        requests: List[PlacementRequest] = []
        merged: Dict[int, ResolvedTarget] = {}
        for i, bound in ready:
            rt = merge_targets(bound)
            merged[i] = rt
            requests.extend(self._requests(i, self.spec.annotations[i], rt))

        placements = {p.annotation_id: p for p in place_all(requests, self.grid, self.budget)}

        for i, bound in ready:
            root = self.spec.annotations[i]
            rt = merged[i]
            for kind in (EffectKind.ENCLOSURE, EffectKind.TEXT, EffectKind.CONNECTOR, EffectKind.INDICATOR):
                ann = root.effect(kind)
                if ann is None:
                    continue
                try:
                    result = self._finalize_effect(i, kind, ann, root, rt, bound, placements)
                except ChartnotesError as e:
                    e.path = e.path or f"/annotations/{i}/{kind.value}"
                    raise
                if result is not None:
                    self.results[ann.id] = result
                    self.boxes[ann.id] = result.bbox

    def _enclosure_box(self, ann: Annotation, rt: ResolvedTarget) -> Rect:
        return rt.union_bbox.inflate(ann.body.padding)

    def _requests(self, index: int, root: AnnotationRoot, rt: ResolvedTarget) -> List[PlacementRequest]:
        requests = []
        text_target = rt
        enclosure = root.enclosure
        if enclosure is not None:
            box = self._enclosure_box(enclosure, rt)
            path = f"/annotations/{index}/enclosure"
            pos = enclosure.body.position
            if pos is None:
                requests.append(PlacementRequest(enclosure.id, (box.w, box.h), pinned=box, warn_overlap=False, path=path))
                text_target = ResolvedTarget(None, (enclosure.id,), (box,))
            elif isinstance(pos, FixedPosition):
                x, y = self._fixed_point(pos)
                requests.append(PlacementRequest(enclosure.id, (box.w, box.h), pinned=Rect(x, y, box.w, box.h), path=path))
            else:
                requests.append(PlacementRequest(enclosure.id, (box.w, box.h), target=rt, position=pos, path=path))

        text = root.text
        if text is not None:
            w, h = measure_text(text.body.content, text.style.font_size)
            path = f"/annotations/{index}/text"
            pos = text.body.position
            if isinstance(pos, FixedPosition):
                x, y = self._fixed_point(pos)
                left = x - w * _anchor_shift(text.style.text_anchor)
                pinned = Rect(left, y - text.style.font_size, w, h)
                requests.append(PlacementRequest(text.id, (w, h), pinned=pinned, path=path))
            else:
                requests.append(PlacementRequest(text.id, (w, h), target=text_target, position=pos, path=path))
        return requests

    def _fixed_point(self, pos: FixedPosition) -> Point:
        x, y = map_fixed(pos.at, self.scales, self.scene.plot_area)
        return (x + pos.dx, y + pos.dy)

    def _finalize_effect(
        self,
        index: int,
        kind: EffectKind,
        ann: Annotation,
        root: AnnotationRoot,
        rt: ResolvedTarget,
        bound: List[ResolvedTarget],
        placements: Dict[str, PlacementResult],
    ) -> Optional[ResolvedAnnotation]:
        if kind == EffectKind.ENCLOSURE:
            placed = placements[ann.id]
            return self._enclosure(index, ann, placed, rt)
        if kind == EffectKind.TEXT:
            return self._text(index, ann, placements[ann.id])
        if kind == EffectKind.CONNECTOR:
            return self._connector(index, ann, root, rt, bound)
        return self._indicator(index, ann, rt)

    def _enclosure(self, index: int, ann: Annotation, placed: PlacementResult, rt: ResolvedTarget) -> ResolvedAnnotation:
        body: EnclosureAnn = ann.body
        box = placed.bbox
        if body.shape == ShapeKind.ELLIPSE:
            shape: Shape = Ellipse(box.center[0], box.center[1], box.w / 2, box.h / 2)
        elif body.shape == ShapeKind.BRACKET:
            tick = min(BRACKET_TICK, box.w / 2)
            shape = Polyline(((box.x + tick, box.y), (box.x, box.y), (box.x, box.bottom), (box.x + tick, box.bottom)))
        elif body.shape == ShapeKind.PATH:
            shape = SvgPath(body.path, box)
        else:
            shape = RectShape(box.x, box.y, box.w, box.h)
        links = tuple((ann.id, n) for n in rt.nodes)
        return ResolvedAnnotation(ann.id, EffectKind.ENCLOSURE, (shape,), ann.style, box, index, links=links, placement=placed)

    def _text(self, index: int, ann: Annotation, placed: PlacementResult) -> ResolvedAnnotation:
        body: TextAnn = ann.body
        box = placed.bbox
        anchor = ann.style.text_anchor
        x = box.x + box.w * _anchor_shift(anchor)
        run = TextRun(
            x=x,
            y=box.y + ann.style.font_size,
            lines=tuple(body.content.split("\n")),
            font_size=ann.style.font_size,
            width=box.w,
            anchor=anchor.value,
        )
        return ResolvedAnnotation(ann.id, EffectKind.TEXT, (run,), ann.style, box, index, placement=placed)

    def _connector(
        self,
        index: int,
        ann: Annotation,
        root: AnnotationRoot,
        rt: ResolvedTarget,
        bound: List[ResolvedTarget],
    ) -> Optional[ResolvedAnnotation]:
        body: ConnectorAnn = ann.body
        if body.path is not None:
            points = path_points(body.path)
            box = Rect.from_points(points)
            heads = arrowheads(points, body.markers.at_start, body.markers.at_end)
            return ResolvedAnnotation(
                ann.id, EffectKind.CONNECTOR, (SvgPath(body.path, None),), ann.style, box, index, markers=tuple(heads)
            )

        pairs: List[Tuple[str, Rect, str, Rect]] = []
        text = self.results.get(root.text.id) if root.text is not None else None
        enclosure = self.results.get(root.enclosure.id) if root.enclosure is not None else None
        if text is not None:
            if enclosure is not None:
                pairs.append((text.id, text.bbox, enclosure.id, enclosure.bbox))
            else:
                pairs.extend((text.id, text.bbox, n, b) for n, b in zip(rt.nodes, rt.boxes))
        elif len(bound) >= 2:
            rest = merge_targets(bound[1:])
            pairs.append((bound[0].nodes[0], bound[0].union_bbox, rest.nodes[0], rest.union_bbox))
        else:
            logger.warning(
                f"Connector '{ann.id}' has no source (no text and a single target); skipped",
                extra=diagnostic("ConnectorWithoutSource", f"/annotations/{index}/connector"),
            )
            return None

        lines = [route_connector(src, dst, body.interpolation) for _, src, _, dst in pairs]
        heads = [h for line in lines for h in arrowheads(line, body.markers.at_start, body.markers.at_end)]
        return ResolvedAnnotation(
            ann.id,
            EffectKind.CONNECTOR,
            tuple(Polyline(tuple(line)) for line in lines),
            ann.style,
            _polylines_bbox(lines),
            index,
            markers=tuple(heads),
            links=tuple((a, b) for a, _, b, _ in pairs),
        )

    # Indicators

    def _indicator(self, index: int, ann: Annotation, rt: ResolvedTarget) -> ResolvedAnnotation:
        body: IndicatorAnn = ann.body
        path = f"/annotations/{index}/indicator/expr"
        plot = self.scene.plot_area
        channel = Channel(body.axis)
        scale = self.scales[channel]
        vertical = channel == Channel.X

        if body.kind == IndicatorKind.TREND:
            points = self._trend(body.expr, path)
        elif body.kind == IndicatorKind.AREA:
            lo, hi = self._area_extent(body, scale, path)
            if vertical:
                box = Rect(lo, plot.y, hi - lo, plot.h)
            else:
                box = Rect(plot.x, lo, plot.w, hi - lo)
            shape = RectShape(box.x, box.y, box.w, box.h)
            return ResolvedAnnotation(ann.id, EffectKind.INDICATOR, (shape,), ann.style, box, index)
        else:
            p = self._level_pixel(body.expr, scale, path)
            if body.kind == IndicatorKind.LINE:
                points = [(p, plot.y), (p, plot.bottom)] if vertical else [(plot.x, p), (plot.right, p)]
            else:
                points = self._arrow(p, rt, vertical)

        heads = arrowheads(points, body.markers.at_start, body.markers.at_end)
        links = tuple((ann.id, n) for n in rt.nodes) if body.kind == IndicatorKind.ARROW else ()
        return ResolvedAnnotation(
            ann.id,
            EffectKind.INDICATOR,
            (Polyline(tuple(points)),),
            ann.style,
            Rect.from_points(points),
            index,
            markers=tuple(heads),
            links=links,
        )

    def _constant(self, src: str, scale: Scale, path: str) -> Value:
        try:
            value = eval_constant(parse_expr(src, self.table.schema), self.table)
        except ChartnotesError as e:
            e.path = e.path or path
            raise
        if scale.value_type == ColumnType.TEMPORAL and isinstance(value, str):
            ms = parse_temporal(value)
            if ms is None:
                raise ExprTypeError(f"'{value}' is not an ISO-8601 date", path=path)
            return ms
        return value

    def _level_pixel(self, src: str, scale: Scale, path: str) -> float:
        value = self._constant(src, scale, path)
        if not scale.contains(value):
            raise DomainMiss(f"Indicator level {value!r} lies outside the axis domain", path=path)
        return scale.apply(value)

    def _area_extent(self, body: IndicatorAnn, scale: Scale, path: str) -> Tuple[float, float]:
        r0, r1 = sorted(scale.range)
        if isinstance(body.expr, tuple):
            pixels = []
            for k, src in enumerate(body.expr):
                value = self._constant(src, scale, f"{path}/{k}")
                if not scale.continuous and not scale.contains(value):
                    raise DomainMiss(f"Area bound {value!r} is not an axis category", path=f"{path}/{k}")
                pixels.append(min(max(scale.apply(value), r0), r1))
            return min(pixels), max(pixels)

        predicate = parse_expr(body.expr, {**self.table.schema, "value": scale.value_type})
        spans = []
        if not scale.continuous:
            for v in scale.domain:
                if self._holds(predicate, v):
                    if scale.bandwidth:
                        start = scale.band_start(v)
                        spans.append((start, start + scale.bandwidth))
                    else:
                        c = scale.apply(v)
                        spans.append((c - abs(scale.step) / 2, c + abs(scale.step) / 2))
        else:
            for px in np.arange(math.floor(r0), math.ceil(r1)) + 0.5:
                v = scale.invert(float(px))
                if scale.value_type == ColumnType.TEMPORAL:
                    v = int(round(v))
                if self._holds(predicate, v):
                    spans.append((float(px) - 0.5, float(px) + 0.5))
        if not spans:
            raise TargetEmpty("The area predicate holds for no axis value", path=path)
        return min(s[0] for s in spans), max(s[1] for s in spans)

    def _holds(self, predicate: ParsedExpr, v: Value) -> bool:
        try:
            return bool(Evaluator(self.table, {"value": v}).evaluate(predicate.root, None))
        except NullOperand:
            return False

    def _arrow(self, level: float, rt: ResolvedTarget, vertical: bool) -> List[Point]:
        box = self.scene.plot_area if rt.is_none else rt.union_bbox
        cx, cy = box.center
        if vertical:
            if level < box.x:
                return [(box.x, cy), (level, cy)]
            if level > box.right:
                return [(box.right, cy), (level, cy)]
            return [(cx, cy), (level, cy)]
        if level < box.y:
            return [(cx, box.y), (cx, level)]
        if level > box.bottom:
            return [(cx, box.bottom), (cx, level)]
        return [(cx, cy), (cx, level)]

    def _trend(self, src: str, path: str) -> List[Point]:
        rows = select_rows(parse_expr(src, self.table.schema), self.table)
        marks = [self.scene.mark_for_row(r) for r in rows]
        centers = [m.bbox.center for m in marks if m is not None]
        xs = np.array([c[0] for c in centers])
        ys = np.array([c[1] for c in centers])
        if len(np.unique(xs)) < 2:
            raise TargetEmpty("A trend needs at least two marks at distinct x positions", path=path)
        slope, intercept = np.polyfit(xs, ys, 1)
        x0, x1 = float(xs.min()), float(xs.max())
        return [(x0, float(slope * x0 + intercept)), (x1, float(slope * x1 + intercept))]

    # Ensembles

    def _finalize_reference(self, k: int, known: Dict[str, Rect]) -> None:
        ensemble: ReferenceEnsemble = self.spec.ensembles[k]
        self.links.append((ensemble.from_id, ensemble.to_id))
        ann = ensemble.connector
        if ann is None:
            return
        body: ConnectorAnn = ann.body
        if body.path is not None:
            points = path_points(body.path)
            geometry: Tuple[Shape, ...] = (SvgPath(body.path, None),)
        else:
            points = route_connector(known[ensemble.from_id], known[ensemble.to_id], body.interpolation)
            geometry = (Polyline(tuple(points)),)
        heads = arrowheads(points, body.markers.at_start, body.markers.at_end)
        result = ResolvedAnnotation(
            ann.id,
            EffectKind.CONNECTOR,
            geometry,
            ann.style,
            Rect.from_points(points),
            markers=tuple(heads),
            links=((ensemble.from_id, ensemble.to_id),),
        )
        self.results[ann.id] = result
        self.boxes[ann.id] = result.bbox

    def _ordered(self) -> List[ResolvedAnnotation]:
        ordered = []
        for root in self.spec.annotations:
            for _, ann in root.effects():
                if ann.id in self.results:
                    ordered.append(self.results[ann.id])
        for ensemble in self.spec.ensembles:
            connector = getattr(ensemble, "connector", None)
            if connector is not None:
                ordered.append(self.results[connector.id])
        return ordered


def assemble(
    spec: Spec,
    scene: SceneGraph,
    scales: Dict[Channel, Scale],
    grid: OccupancyGrid,
    budget: Optional[int] = None,
) -> List[ResolvedAnnotation]:
    """Resolve, place and assemble every annotation of ``spec``; see ``Assembler``."""
    return Assembler(spec, scene, scales, grid, budget).assemble()


# Scene attachment

def _paint(ann: ResolvedAnnotation, shape: Shape) -> Paint:
    style = ann.style
    base = dict(
        stroke_width=style.stroke_width,
        opacity=style.opacity,
        font_size=style.font_size,
        font_weight=style.font_weight.value,
        dash=style.dash or (),
    )
    if isinstance(shape, TextRun):
        color = style.fill if style.fill != "none" else style.stroke
        return Paint(stroke="none", fill=color, **base)
    if ann.kind == EffectKind.INDICATOR and isinstance(shape, RectShape):
        if style.fill == "none":
            base["opacity"] = style.opacity * AREA_OPACITY
        return Paint(stroke="none", fill=style.fill if style.fill != "none" else style.stroke, **base)
    if isinstance(shape, Polyline) or (isinstance(shape, SvgPath) and ann.kind == EffectKind.CONNECTOR):
        return Paint(stroke=style.stroke, fill="none", **base)
    return Paint(stroke=style.stroke, fill=style.fill, **base)


def annotation_node(ann: ResolvedAnnotation) -> SceneNode:
    """Scene node for one resolved annotation; a group when it has several parts."""
    tag = AnnotationNode(ann.id)
    if len(ann.geometry) == 1 and not ann.markers:
        return leaf(ann.id, tag, ann.geometry[0], _paint(ann, ann.geometry[0]))
    children = [leaf(f"{ann.id}/{k}", tag, shape, _paint(ann, shape)) for k, shape in enumerate(ann.geometry)]
    marker_paint = Paint(stroke="none", fill=ann.style.stroke, opacity=ann.style.opacity)
    children += [leaf(f"{ann.id}/arrow/{k}", tag, head, marker_paint) for k, head in enumerate(ann.markers)]
    return container(ann.id, tag, children)


def attach_annotations(scene: SceneGraph, annotations: Sequence[ResolvedAnnotation]) -> SceneGraph:
    """
    Scene graph with an ``annotations`` group appended after the chart layers.

    Args:
        scene: Compiled chart scene
        annotations: Assembled annotations in paint order

    Returns:
        New scene graph; the input is left untouched
    """
    group = container("annotations", Group("annotations"), [annotation_node(a) for a in annotations])
    children = list(scene.root.children) + [group]
    root = container("root", Canvas(), children, base=scene.canvas)
    return SceneGraph(root=root, width=scene.width, height=scene.height)
