"""Tests for the occupancy grid and backtracking placement."""

import itertools
import logging
import random

import pytest

from chartnotes.geometry import Rect
from chartnotes.grammar import (
    Anchor1D,
    Anchor1DKind,
    Anchor2D,
    Anchor2DKind,
    FixedPos,
    FixedPosition,
    NoneTarget,
    parse_spec,
)
from chartnotes.layout import (
    OccupancyGrid,
    PlacementRequest,
    PlacementSearch,
    ResolvedTarget,
    build_grid,
    candidate_anchors,
    clamp_to,
    place_all,
)
from chartnotes.pipeline import compile_spec

from .corpus import MONTHS, POINT_COLOR, make_spec


def _target(rect, name="t"):
    return ResolvedTarget(None, (name,), (rect,))


class TestOccupancyGrid:
    """Cell arithmetic and claims."""

    def test_dimensions(self):
        grid = OccupancyGrid(100, 50, 4)
        assert (grid.cols, grid.rows) == (25, 13)

    def test_span_covers_touched_cells(self):
        grid = OccupancyGrid(100, 100, 4)
        grid.occupy(Rect(3, 3, 2, 2))
        assert grid.occluded_cells(Rect(0, 0, 8, 8)) == 4
        assert grid.occluded_cells(Rect(0, 0, 4, 4)) == 1

    def test_cell_aligned_rect(self):
        grid = OccupancyGrid(100, 100, 4)
        grid.occupy(Rect(4, 4, 4, 4))
        assert grid.occluded_cells(grid.canvas) == 1

    def test_zero_size_rect_claims_one_cell(self):
        grid = OccupancyGrid(100, 100, 4)
        grid.occupy(Rect(9, 9, 0, 0))
        assert grid.occluded_cells(grid.canvas) == 1

    def test_claim_and_release(self):
        grid = OccupancyGrid(100, 100, 4)
        grid.occupy(Rect(0, 0, 10, 10))
        before = grid.counts.copy()
        grid.claim("a", Rect(5, 5, 20, 20))
        assert not grid.is_free(Rect(20, 20, 2, 2))
        grid.release("a")
        assert (grid.counts == before).all()
        assert grid.is_free(Rect(20, 20, 2, 2))

    def test_off_canvas_is_not_free(self):
        grid = OccupancyGrid(100, 100, 4)
        assert not grid.is_free(Rect(95, 0, 10, 10))
        assert not grid.is_free(Rect(-1, 0, 10, 10))

    def test_invalid_cell_size(self):
        with pytest.raises(ValueError):
            OccupancyGrid(10, 10, 0)


def test_build_grid_leaves_gridlines_and_background_free(compile_doc):
    """Only drawn marks, axes and labels occupy cells."""
    result = compile_doc(make_spec(mark="point"))
    grid = build_grid(result.chart_scene, 4)
    assert grid.is_free(Rect(60, 50, 20, 20))
    mark = result.chart_scene.get("mark/0").bbox
    assert grid.occluded_cells(mark) > 0
    label = result.chart_scene.get("axis/x/label").bbox
    assert grid.occluded_cells(label) > 0


def test_build_grid_skips_invisible_vertices(compile_doc):
    """Line charts occupy the polyline, not the per-row helper boxes."""
    result = compile_doc(make_spec(mark="line"))
    grid = build_grid(result.chart_scene, 4)
    series = result.chart_scene.get("mark/series/0").geometry.points
    x, y = series[0]
    assert grid.occluded_cells(Rect(x, y, 0, 0)) == 1
    assert grid.occupied.sum() < grid.cols * grid.rows / 2


class TestCandidates:
    """Candidate order around a target."""

    box = Rect(100, 100, 10, 10)

    def test_auto_rings_then_center(self):
        found = candidate_anchors(_target(self.box), (20, 10))
        assert len(found) == 17
        assert found[0].anchor == "up"
        assert found[0].rect == Rect(95, 86, 20, 10)
        assert found[1].anchor == "upRight"
        assert found[1].rect == Rect(114, 86, 20, 10)
        assert found[8].anchor == "up@16"
        assert found[8].rect == Rect(95, 74, 20, 10)
        assert found[-1].anchor == "center"
        assert found[-1].rect == Rect(95, 100, 20, 10)

    def test_none_target_starts_bottom_left(self):
        rt = ResolvedTarget(NoneTarget(), ("none/0",), (self.box,))
        assert candidate_anchors(rt, (20, 10))[0].anchor == "downLeft"

    def test_explicit_anchor_with_offset(self):
        pos = Anchor2D(anchor=Anchor2DKind.MID_RIGHT, dx=2, dy=-3)
        found = candidate_anchors(_target(self.box), (20, 10), pos)
        assert [c.anchor for c in found] == ["midRight"]
        assert found[0].rect == Rect(116, 97, 20, 10)

    def test_anchor1d_auto(self):
        found = candidate_anchors(_target(Rect(0, 100, 200, 10)), (20, 10), Anchor1D())
        assert len(found) == 9
        assert [c.anchor for c in found[:3]] == ["start", "start/before", "start/after"]
        assert found[0].rect == Rect(0, 100, 20, 10)
        assert found[1].rect == Rect(0, 86, 20, 10)
        assert found[3].rect.x == 90

    def test_anchor1d_vertical_target(self):
        found = candidate_anchors(_target(Rect(100, 0, 10, 200)), (20, 10), Anchor1D(anchor=Anchor1DKind.END))
        assert found[0].rect == Rect(95, 190, 20, 10)
        assert found[2].rect == Rect(114, 190, 20, 10)

    def test_fixed_position_is_not_searched(self):
        pos = FixedPosition(at=FixedPos(space="pixel", x=0, y=0))
        with pytest.raises(ValueError):
            candidate_anchors(_target(self.box), (20, 10), pos)


class TestSearch:
    """Backtracking, pinning and fallback."""

    box = Rect(90, 90, 20, 20)

    def test_backtracks_to_fit_a_constrained_request(self):
        """A flexible box moves aside for one that has a single slot."""
        grid = OccupancyGrid(200, 200, 4)
        requests = [
            PlacementRequest("a", (20, 10), target=_target(self.box)),
            PlacementRequest("b", (20, 10), target=_target(self.box), position=Anchor2D(anchor=Anchor2DKind.UP)),
        ]
        a, b = place_all(requests, grid)
        assert (a.anchor_used, b.anchor_used) == ("upRight", "up")
        assert not a.fallback and not b.fallback
        assert not a.bbox.intersects(b.bbox)

    def test_pinned_boxes_claim_first(self, caplog):
        grid = OccupancyGrid(200, 200, 4)
        up = Rect(90, 76, 20, 10)
        requests = [
            PlacementRequest("a", (20, 10), target=_target(self.box)),
            PlacementRequest("p", (20, 10), pinned=up),
        ]
        with caplog.at_level(logging.WARNING, logger="chartnotes"):
            a, p = place_all(requests, grid)
        assert p.anchor_used == "fixed"
        assert p.bbox == up
        assert a.anchor_used == "upRight"
        assert not caplog.records

    def test_pinned_overlap_warns(self, caplog):
        grid = OccupancyGrid(200, 200, 4)
        grid.occupy(Rect(0, 0, 40, 40))
        request = PlacementRequest("p", (10, 10), pinned=Rect(10, 10, 10, 10), path="/annotations/0/text")
        with caplog.at_level(logging.WARNING, logger="chartnotes"):
            place_all([request], grid)
        assert [(r.code, r.path) for r in caplog.records] == [("FixedOverlap", "/annotations/0/text")]

    def test_budget_exhaustion_falls_back(self, caplog):
        grid = OccupancyGrid(200, 200, 4)
        requests = [
            PlacementRequest("a", (20, 10), target=_target(self.box)),
            PlacementRequest("b", (20, 10), target=_target(self.box), position=Anchor2D(anchor=Anchor2DKind.UP)),
        ]
        search = PlacementSearch(grid, budget=1)
        with caplog.at_level(logging.WARNING, logger="chartnotes"):
            a, b = search.place_all(requests)
        assert not a.fallback
        assert b.fallback
        assert [r.code for r in caplog.records] == ["FallbackPlacement"]

    def test_no_free_slot_falls_back_on_canvas(self):
        grid = OccupancyGrid(40, 40, 4)
        grid.occupy(grid.canvas)
        (result,) = place_all([PlacementRequest("a", (20, 10), target=_target(Rect(0, 0, 5, 5)))], grid)
        assert result.fallback
        assert grid.canvas.contains(result.bbox)


def test_clamp_to():
    canvas = Rect(0, 0, 100, 100)
    assert clamp_to(Rect(-5, 95, 10, 10), canvas) == Rect(0, 90, 10, 10)
    assert clamp_to(Rect(20, 20, 10, 10), canvas) == Rect(20, 20, 10, 10)


# Random instances.

def _cells(grid, rect):
    rows, cols = grid.span(rect)
    return {(r, c) for r in range(rows.start, rows.stop) for c in range(cols.start, cols.stop)}


def _random_instance(rng):
    blocks = [
        Rect(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(4, 30), rng.uniform(4, 30))
        for _ in range(rng.randrange(5))
    ]
    requests = []
    for k in range(3):
        box = Rect(rng.uniform(10, 90), rng.uniform(10, 90), rng.uniform(2, 16), rng.uniform(2, 16))
        size = (rng.uniform(8, 30), rng.uniform(6, 14))
        requests.append(PlacementRequest(f"r{k}", size, target=_target(box, f"t{k}")))
    return blocks, requests


def _grid(blocks):
    grid = OccupancyGrid(120, 120, 4)
    for b in blocks:
        grid.occupy(b)
    return grid


def _exhaustive(grid, requests):
    """True when some assignment places every request on free, disjoint cells."""
    options = []
    for req in requests:
        free = [c.rect for c in candidate_anchors(req.target, req.size) if grid.is_free(c.rect)]
        options.append([(rect, _cells(grid, rect)) for rect in free])
    for combo in itertools.product(*options):
        cells = [c for _, c in combo]
        if all(cells[i].isdisjoint(cells[j]) for i in range(len(cells)) for j in range(i + 1, len(cells))):
            return True
    return False


@pytest.mark.slow
def test_search_is_complete_on_small_instances():
    """With an ample budget the search finds a layout whenever one exists."""
    rng = random.Random(7)
    solvable = 0
    for _ in range(50):
        blocks, requests = _random_instance(rng)
        expected = _exhaustive(_grid(blocks), requests)
        results = place_all(requests, _grid(blocks), budget=100_000)
        assert (not any(r.fallback for r in results)) == expected
        solvable += expected
    assert solvable > 0


def _random_doc(rng):
    mark = rng.choice(["bar", "line", "point"])
    annotations = []
    for _ in range(rng.randrange(1, 7)):
        root = {
            "targets": [{"dataPoint": sorted(rng.sample(range(12), rng.randrange(1, 3)))}],
            "text": {"content": rng.choice(MONTHS) * rng.randrange(1, 4)},
        }
        if rng.random() < 0.3:
            root["enclosure"] = {"shape": rng.choice(["rect", "ellipse"])}
        if rng.random() < 0.3:
            root["connector"] = {"markers": "arrow-end"}
        annotations.append(root)
    extra = {"encoding": POINT_COLOR} if mark == "point" and rng.random() < 0.5 else {}
    return make_spec(annotations, mark=mark, **extra)


@pytest.mark.slow
def test_placements_never_overlap():
    """Placed boxes avoid chart content and each other unless flagged as fallbacks."""
    rng = random.Random(11)
    for _ in range(200):
        result = compile_spec(parse_spec(_random_doc(rng)))
        base = build_grid(result.chart_scene)
        placed = [a.placement for a in result.annotations if a.placement is not None]
        for p in placed:
            if p.fallback or p.anchor_used == "fixed":
                continue
            assert base.occluded_cells(p.bbox) == 0, p
            assert base.on_canvas(p.bbox)
            others = [q for q in placed if q is not p and not q.fallback]
            assert all(not p.bbox.intersects(q.bbox) for q in others), p
