"""End-to-end compilation tests."""

import json

import pytest

from chartnotes.grammar import EffectKind
from chartnotes.pipeline import compile_file, pretty_lines, spec_line_counts

from .corpus import PEAK, POINT_COLOR, corpus_doc, corpus_ids, make_spec

PEAK_NOTE = {"targets": [PEAK], "text": {"content": "Peak"}, "connector": {"markers": "arrow-end"}}


@pytest.mark.parametrize(
    "mark, extra",
    [("bar", {}), ("line", {}), ("point", {}), ("point", {"encoding": POINT_COLOR}), ("area", {})],
)
def test_annotation_block_is_portable(compile_doc, mark, extra):
    """The same annotation block lands on the peak for every mark type."""
    result = compile_doc(make_spec([PEAK_NOTE], mark=mark, **extra))
    connector = next(a for a in result.annotations if a.kind == EffectKind.CONNECTOR)
    tip = connector.geometry[0].points[-1]
    peak = result.chart_scene.get("mark/11").bbox.inflate(1)
    assert peak.contains_point(tip)
    text = next(a for a in result.annotations if a.kind == EffectKind.TEXT)
    assert not text.placement.fallback


@pytest.mark.parametrize("name", corpus_ids())
def test_corpus_compiles(compile_doc, name):
    result = compile_doc(corpus_doc(name))
    assert result.annotations
    ids = [a.id for a in result.annotations]
    assert len(ids) == len(set(ids))
    assert result.rounds >= 1


def test_compile_file(demos_dir):
    result = compile_file(demos_dir / "bar.json")
    assert result.spec.table.row_count == 12
    assert len(result.annotations) == 5
    assert result.svg().startswith(b"<?xml")


def test_compile_file_with_grid_options(demos_dir):
    result = compile_file(demos_dir / "bar.json", grid_size=8, placement_budget=50)
    assert result.grid.cell_size == 8
    assert result.grid.cols == 60


def test_scene_with_annotations_dumps(compile_doc):
    result = compile_doc(corpus_doc("composite"))
    payload = json.loads(json.dumps(result.scene.to_dict()))
    group = payload["root"]["children"][-1]
    assert [c["id"] for c in group["children"]] == [a.id for a in result.annotations]


def test_pretty_lines_keeps_short_containers_inline():
    assert pretty_lines({"b": [1, 2], "a": "x"}) == ['{"a": "x", "b": [1, 2]}']
    assert pretty_lines([]) == ["[]"]


def test_pretty_lines_expands_long_containers():
    lines = pretty_lines({"targets": ["none"], "text": {"content": "x" * 80}})
    assert lines == [
        "{",
        '  "targets": ["none"],',
        '  "text": {',
        '    "content": "' + "x" * 80 + '"',
        "  }",
        "}",
    ]


def test_spec_line_counts(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(make_spec([PEAK_NOTE])), encoding="utf-8")
    counts = spec_line_counts(path)
    assert counts["annotationLines"] == 7
    assert counts["specLines"] > counts["annotationLines"]


@pytest.mark.parametrize("demo", ["bar.json", "line.json", "scatter.json"])
def test_demo_annotations_are_brief(demos_dir, demo):
    """Each demo states its annotations in at most 30 printed lines."""
    assert spec_line_counts(demos_dir / demo)["annotationLines"] <= 30
