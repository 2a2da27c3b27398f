"""Tests for target resolution."""

import logging

import pytest

from chartnotes.chart import Channel
from chartnotes.errors import DomainMiss, MissingChartPart, TargetEmpty
from chartnotes.geometry import Rect
from chartnotes.grammar import (
    Anchor2DKind,
    AxisTarget,
    ByIdTarget,
    ChartPartTarget,
    DataPointTarget,
    FixedPos,
    FixedTarget,
    NoneTarget,
)
from chartnotes.layout import ResolvedTarget, TargetResolver, map_fixed, merge_targets, resolve_target
from chartnotes.scene import AxisPartKind, ChartPartKind

from .corpus import TEMPORAL_XY, make_spec


@pytest.fixture
def resolver(bar_result):
    return TargetResolver(bar_result.chart_scene, bar_result.spec.table, bar_result.scales)


def test_data_point_indices(resolver, bar_result):
    """Index lists select the marks of those rows."""
    rt = resolver.resolve(DataPointTarget(indices=(0, 1)))
    assert rt.nodes == ("mark/0", "mark/1")
    assert rt.boxes == (bar_result.chart_scene.get("mark/0").bbox, bar_result.chart_scene.get("mark/1").bbox)


def test_resolve_target_function(bar_result):
    rt = resolve_target(
        DataPointTarget(indices=(3,)), bar_result.chart_scene, bar_result.spec.table, bar_result.scales
    )
    assert rt.nodes == ("mark/3",)
    assert rt.union_bbox == bar_result.chart_scene.get("mark/3").bbox


def test_data_point_expression(resolver):
    """Predicates select the matching rows."""
    rt = resolver.resolve(DataPointTarget(expr="datum.sales == max(sales)"))
    assert rt.nodes == ("mark/11",)


def test_data_point_without_marks(resolver):
    """Selecting no drawn mark is an error located at the target."""
    with pytest.raises(TargetEmpty) as info:
        resolver.resolve(DataPointTarget(indices=(99,)), root_index=2, target_index=1)
    assert info.value.path == "/annotations/2/targets/1"


def test_data_point_index_past_last_row_warns(resolver, caplog):
    """Indices past the last row are dropped with a warning at the target."""
    with caplog.at_level(logging.WARNING, logger="chartnotes"):
        rt = resolver.resolve(DataPointTarget(indices=(0, 999)), root_index=1, target_index=0)
    assert rt.nodes == ("mark/0",)
    (record,) = caplog.records
    assert record.code == "IndexOutOfRange"
    assert record.path == "/annotations/1/targets/0/dataPoint"
    assert "999" in record.getMessage()


def test_none_target(resolver):
    """The none target sits at the top-right corner of the plot."""
    rt = resolver.resolve(NoneTarget(), root_index=3)
    assert rt.is_none
    assert rt.nodes == ("none/3",)
    assert rt.boxes == (Rect(460, 40, 0, 0),)


def test_id_targets_are_deferred(resolver):
    assert resolver.resolve(ByIdTarget(id="anything")) is None


def test_fixed_pixel_target(resolver):
    """Pixel coordinates are relative to the plot area."""
    rt = resolver.resolve(FixedTarget(at=FixedPos(space="pixel", x=10, y=20)))
    assert rt.union_bbox == Rect(60, 60, 0, 0)


def test_fixed_data_target(resolver, bar_result):
    """Data coordinates go through the scales."""
    rt = resolver.resolve(FixedTarget(at=FixedPos(space="data", x="Mar", y=150)))
    x = bar_result.scales[Channel.X].apply("Mar")
    assert rt.union_bbox.x == pytest.approx(x)
    assert rt.union_bbox.y == pytest.approx(160)


def test_fixed_data_outside_domain(resolver):
    with pytest.raises(DomainMiss):
        resolver.resolve(FixedTarget(at=FixedPos(space="data", x="Mar", y=500)))
    with pytest.raises(DomainMiss):
        resolver.resolve(FixedTarget(at=FixedPos(space="data", x="Smarch", y=100)))


def test_fixed_temporal_data(compile_doc):
    """Date strings are accepted on time scales."""
    result = compile_doc(make_spec(mark="line", encoding=TEMPORAL_XY))
    point = map_fixed(
        FixedPos(space="data", x="2024-06-01", y=200), result.scales, result.chart_scene.plot_area
    )
    x = result.scales[Channel.X]
    assert point[0] == pytest.approx(x.apply(x.domain[0]) + (x.range[1] - x.range[0]) * (152 / 335))


def test_missing_chart_part(resolver):
    with pytest.raises(MissingChartPart):
        resolver.resolve(ChartPartTarget(part=ChartPartKind.TITLE))


def test_chart_part(compile_doc):
    result = compile_doc(make_spec(title="Sales"))
    resolver = TargetResolver(result.chart_scene, result.spec.table, result.scales)
    assert resolver.resolve(ChartPartTarget(part=ChartPartKind.TITLE)).nodes == ("chart/title",)


class TestAxisTargets:
    """Axis parts filtered by range."""

    def test_category_range(self, resolver):
        t = AxisTarget(axis="x", parts=(AxisPartKind.TICK_LABEL,), range=("Mar", "May"))
        assert resolver.resolve(t).nodes == ("axis/x/tick-label/2", "axis/x/tick-label/3", "axis/x/tick-label/4")

    def test_reversed_range(self, resolver):
        t = AxisTarget(axis="x", parts=(AxisPartKind.TICK,), range=("May", "Mar"))
        assert len(resolver.resolve(t).nodes) == 3

    def test_numeric_range(self, resolver):
        t = AxisTarget(axis="y", parts=(AxisPartKind.GRID,), range=(150, 300))
        assert resolver.resolve(t).nodes == ("axis/y/grid/2", "axis/y/grid/3")

    def test_expression_range(self, resolver):
        t = AxisTarget(axis="y", parts=(AxisPartKind.TICK_LABEL, AxisPartKind.TICK), range="datum.value >= 200")
        assert set(resolver.resolve(t).nodes) == {
            "axis/y/tick/2",
            "axis/y/tick-label/2",
            "axis/y/tick/3",
            "axis/y/tick-label/3",
        }

    def test_label_ignores_range(self, resolver):
        """Axis labels carry no value, so a range excludes them."""
        t = AxisTarget(axis="x", parts=(AxisPartKind.LABEL,), range=("Jan", "Dec"))
        with pytest.raises(TargetEmpty):
            resolver.resolve(t)

    def test_whole_label(self, resolver):
        assert resolver.resolve(AxisTarget(axis="x", parts=(AxisPartKind.LABEL,))).nodes == ("axis/x/label",)

    def test_unknown_category(self, resolver):
        t = AxisTarget(axis="x", parts=(AxisPartKind.TICK_LABEL,), range=("Jan", "Smarch"))
        with pytest.raises(DomainMiss):
            resolver.resolve(t)

    def test_empty_range(self, resolver):
        t = AxisTarget(axis="y", parts=(AxisPartKind.GRID,), range=(310, 400))
        with pytest.raises(TargetEmpty):
            resolver.resolve(t)


def test_merge_drops_repeated_nodes():
    """Merged targets keep first-seen node order without repeats."""
    a = ResolvedTarget(None, ("m/0", "m/1"), (Rect(0, 0, 1, 1), Rect(2, 0, 1, 1)))
    b = ResolvedTarget(None, ("m/1", "m/2"), (Rect(2, 0, 1, 1), Rect(4, 4, 2, 2)))
    merged = merge_targets([a, b])
    assert merged.nodes == ("m/0", "m/1", "m/2")
    assert merged.union_bbox == Rect(0, 0, 6, 6)
    assert merged.source is None


def test_anchor_points():
    rt = ResolvedTarget(None, ("n",), (Rect(10, 20, 30, 40),))
    assert rt.anchor_point(Anchor2DKind.UP_LEFT) == (10, 20)
    assert rt.anchor_point(Anchor2DKind.CENTER) == (25, 40)
    assert rt.anchor_point(Anchor2DKind.DOWN_RIGHT) == (40, 60)


def test_resolved_target_needs_nodes():
    with pytest.raises(ValueError):
        ResolvedTarget(None, (), ())
