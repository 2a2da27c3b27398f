"""Tests for annotation assembly."""

import logging

import pytest

from chartnotes.errors import CycleUnresolved, DomainMiss, DuplicateId, TargetEmpty, UnresolvedReference
from chartnotes.geometry import Ellipse, Polyline, Rect, RectShape, TextRun, union_rects
from chartnotes.grammar import EffectKind, parse_spec
from chartnotes.layout import Assembler, assemble, build_grid

from .corpus import PEAK, corpus_doc, make_spec


def _by_kind(result, kind):
    return [a for a in result.annotations if a.kind == kind]


def _flat(points):
    return [v for p in points for v in p]


def _indicator(result):
    (ann,) = _by_kind(result, EffectKind.INDICATOR)
    return ann


class TestEnclosures:
    """Enclosures wrap their targets."""

    def test_ellipse_around_point(self, compile_doc):
        result = compile_doc(corpus_doc("enclosure-ellipse"))
        (ann,) = result.annotations
        (shape,) = ann.geometry
        mark = result.chart_scene.get("mark/2").bbox
        assert isinstance(shape, Ellipse)
        assert (shape.cx, shape.cy) == pytest.approx(mark.center)
        assert shape.rx == pytest.approx(7)
        assert ann.placement.anchor_used == "fixed"

    def test_rect_padding(self, compile_doc):
        result = compile_doc(corpus_doc("enclosure-bracket"))
        (ann,) = result.annotations
        marks = union_rects(result.chart_scene.get(f"mark/{i}").bbox for i in (3, 4))
        assert ann.bbox == marks.inflate(2)
        assert isinstance(ann.geometry[0], Polyline)

    def test_composite_enclosure(self, compile_doc):
        """A composite id binds to the union of its members' boxes."""
        result = compile_doc(corpus_doc("composite"))
        texts = {a.id: a.bbox for a in _by_kind(result, EffectKind.TEXT)}
        (enclosure,) = _by_kind(result, EffectKind.ENCLOSURE)
        assert enclosure.bbox == union_rects([texts["t1"], texts["t2"]]).inflate(4)
        assert enclosure.style.stroke == "#d62728"


class TestText:
    """Text boxes."""

    def test_fixed_pixel_position(self, compile_doc):
        """Pixel positions are plot-relative; the baseline sits at the point."""
        result = compile_doc(corpus_doc("fixed-pixel-position"))
        (ann,) = result.annotations
        assert ann.placement.anchor_used == "fixed"
        assert ann.bbox.x == pytest.approx(60)
        assert ann.bbox.y == pytest.approx(49)
        (run,) = ann.geometry
        assert isinstance(run, TextRun)
        assert run.y == pytest.approx(60)

    def test_multiline_content(self, compile_doc):
        result = compile_doc(corpus_doc("style-config"))
        (text,) = _by_kind(result, EffectKind.TEXT)
        assert text.geometry[0].lines == ("Peak", "month")
        assert text.style.fill == "#1f77b4"

    def test_scene_node_target(self, compile_doc):
        """Scene ids that are not effect ids can be targeted directly."""
        result = compile_doc(corpus_doc("scene-node-target"))
        (ann,) = result.annotations
        mark = result.chart_scene.get("mark/3").bbox
        assert not ann.placement.fallback
        assert ann.bbox.inflate(17).intersects(mark)


class TestConnectors:
    """Connector sources and endpoints."""

    def test_text_to_target(self, compile_doc):
        result = compile_doc(corpus_doc("text-connector-expr"))
        (text,) = _by_kind(result, EffectKind.TEXT)
        (connector,) = _by_kind(result, EffectKind.CONNECTOR)
        (line,) = connector.geometry
        assert text.bbox.contains_point(line.points[0])
        assert result.chart_scene.get("mark/11").bbox.contains_point(line.points[-1])
        assert len(connector.markers) == 1
        assert connector.links == ((text.id, "mark/11"),)

    def test_between_targets(self, compile_doc):
        result = compile_doc(corpus_doc("connector-between-targets"))
        (connector,) = result.annotations
        assert connector.links == (("mark/0", "mark/11"),)
        assert len(connector.markers) == 2

    def test_without_source_is_skipped(self, compile_doc, caplog):
        doc = make_spec([{"targets": [{"dataPoint": [0]}], "connector": {}}])
        with caplog.at_level(logging.WARNING, logger="chartnotes"):
            result = compile_doc(doc)
        assert result.annotations == []
        assert [(r.code, r.path) for r in caplog.records] == [("ConnectorWithoutSource", "/annotations/0/connector")]

    def test_explicit_path(self, compile_doc):
        result = compile_doc(corpus_doc("connector-explicit-path"))
        (connector,) = result.annotations
        assert connector.bbox == Rect(60, 60, 60, 30)
        assert connector.markers[0].points[0] == (120, 90)


class TestIndicators:
    """Reference lines, bands, arrows and trends."""

    def test_mean_line(self, compile_doc):
        result = compile_doc(corpus_doc("indicator-line-y"))
        (line,) = _indicator(result).geometry
        assert _flat(line.points) == pytest.approx([50, 130, 460, 130])

    def test_category_line(self, compile_doc):
        result = compile_doc(corpus_doc("indicator-line-x"))
        (line,) = _indicator(result).geometry
        x = line.points[0][0]
        assert _flat(line.points) == pytest.approx([x, 40, x, 280])

    def test_area_pair(self, compile_doc):
        result = compile_doc(corpus_doc("indicator-area-pair"))
        ann = _indicator(result)
        assert isinstance(ann.geometry[0], RectShape)
        assert ann.bbox == Rect(50, 120, 410, 80)

    def test_area_pair_is_clamped(self, compile_doc):
        doc = make_spec([{"targets": ["none"], "indicator": {"kind": "area", "axis": "y", "expr": ["200", "900"]}}])
        assert _indicator(compile_doc(doc)).bbox == Rect(50, 40, 410, 80)

    def test_area_categories(self, compile_doc):
        result = compile_doc(corpus_doc("indicator-area-categories"))
        bbox = _indicator(result).bbox
        jul = result.chart_scene.get("mark/6").bbox
        aug = result.chart_scene.get("mark/7").bbox
        assert bbox.x == pytest.approx(jul.x)
        assert bbox.right == pytest.approx(aug.right)
        assert (bbox.y, bbox.h) == (40, 240)

    def test_line_outside_domain(self, compile_doc):
        doc = make_spec([{"targets": ["none"], "indicator": {"kind": "line", "axis": "y", "expr": "1000"}}])
        with pytest.raises(DomainMiss) as info:
            compile_doc(doc)
        assert info.value.path == "/annotations/0/indicator/expr"

    def test_empty_area_predicate(self, compile_doc):
        doc = make_spec([{"targets": ["none"], "indicator": {"kind": "area", "axis": "y", "expr": "datum.value > 1000"}}])
        with pytest.raises(TargetEmpty):
            compile_doc(doc)

    def test_arrow_runs_from_mark_to_level(self, compile_doc):
        result = compile_doc(corpus_doc("indicator-arrow"))
        ann = _indicator(result)
        mark = result.chart_scene.get("mark/0").bbox
        cx = mark.center[0]
        assert _flat(ann.geometry[0].points) == pytest.approx([cx, 184, cx, 80])
        assert ann.links == ((ann.id, "mark/0"),)

    def test_trend_spans_the_marks(self, compile_doc):
        result = compile_doc(corpus_doc("indicator-trend"))
        (line,) = _indicator(result).geometry
        first = result.chart_scene.get("mark/0").bbox.center
        last = result.chart_scene.get("mark/11").bbox.center
        assert line.points[0][0] == pytest.approx(first[0])
        assert line.points[1][0] == pytest.approx(last[0])
        assert line.points[1][1] < line.points[0][1]


class TestRounds:
    """Id targets, references and cycles."""

    def test_reference_chain(self, compile_doc):
        """Each id target waits one round for the effect it names."""
        result = compile_doc(corpus_doc("reference-chain"))
        assert result.rounds == 4
        assert [a.id for a in result.annotations] == ["a", "b", "c"]

    def test_reference_connector_painted_last(self, compile_doc):
        result = compile_doc(corpus_doc("reference"))
        last = result.annotations[-1]
        assert last.kind == EffectKind.CONNECTOR
        assert last.links == (("low", "high"),)

    def test_pure_cycle(self, compile_doc):
        doc = make_spec(
            [
                {"targets": [{"id": "b"}], "text": {"id": "a", "content": "A"}},
                {"targets": [{"id": "a"}], "text": {"id": "b", "content": "B"}},
            ]
        )
        with pytest.raises(CycleUnresolved) as info:
            compile_doc(doc)
        assert info.value.path == "/annotations/0"

    def test_unknown_id(self, compile_doc):
        doc = make_spec([{"targets": [{"id": "ghost"}], "text": {"content": "?"}}])
        with pytest.raises(UnresolvedReference) as info:
            compile_doc(doc)
        assert info.value.path == "/annotations/0/targets/0/id"

    def test_assemble_function(self, bar_result):
        spec = parse_spec(corpus_doc("reference-chain"))
        scene = bar_result.chart_scene
        annotations = assemble(spec, scene, bar_result.scales, build_grid(scene))
        assert [a.id for a in annotations] == ["a", "b", "c"]

    def test_round_limit(self, bar_result):
        spec = parse_spec(corpus_doc("reference-chain"))
        assembler = Assembler(
            spec, bar_result.chart_scene, bar_result.scales, build_grid(bar_result.chart_scene), round_limit=2
        )
        with pytest.raises(CycleUnresolved):
            assembler.assemble()

    def test_effect_id_shadowing_scene_node(self, compile_doc):
        doc = make_spec([{"targets": [PEAK], "text": {"id": "mark/3", "content": "Clash"}}])
        with pytest.raises(DuplicateId) as info:
            compile_doc(doc)
        assert info.value.path == "/annotations/0/text/id"


def test_paint_order_within_root(compile_doc):
    doc = make_spec(
        [
            {
                "targets": [{"dataPoint": [3]}],
                "text": {"content": "April"},
                "connector": {},
                "enclosure": {"shape": "rect"},
            }
        ]
    )
    result = compile_doc(doc)
    assert [a.kind for a in result.annotations] == [EffectKind.ENCLOSURE, EffectKind.CONNECTOR, EffectKind.TEXT]
    enclosure, connector, text = result.annotations
    assert connector.links == ((text.id, enclosure.id),)


def test_annotations_attach_to_scene(compile_doc):
    result = compile_doc(corpus_doc("text-connector-expr"))
    scene = result.scene
    assert scene.root.children[-1].id == "annotations"
    assert [c.id for c in scene.root.children[-1].children] == [a.id for a in result.annotations]
