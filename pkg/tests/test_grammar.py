"""Tests for spec parsing, validation and canonical serialization."""

import json

import pytest
import yaml

from chartnotes.data import ColumnType
from chartnotes.errors import (
    DuplicateId,
    EmptyTargets,
    EncodingError,
    ExprSyntaxError,
    ExprTypeError,
    MultipleEffectsOfType,
    SchemaError,
    SpecIOError,
    UnknownField,
)
from chartnotes.grammar import (
    Anchor1D,
    Anchor2D,
    Anchor2DKind,
    AxisTarget,
    ByIdTarget,
    DataPointTarget,
    EffectKind,
    FixedPosition,
    FixedTarget,
    Markers,
    NoneTarget,
    ShapeKind,
    dumps_spec,
    load_spec,
    loads_spec,
    parse_spec,
    serialize_spec,
)
from chartnotes.scene import AxisPartKind

from .corpus import CORPUS, PEAK, corpus_doc, corpus_ids, make_spec


def _error(doc, error=SchemaError):
    with pytest.raises(error) as info:
        parse_spec(doc)
    return info.value


@pytest.mark.parametrize("name", corpus_ids())
def test_corpus_parses(name):
    """Every corpus document is valid."""
    spec = parse_spec(corpus_doc(name))
    assert spec.annotations


@pytest.mark.parametrize("name", corpus_ids())
def test_canonical_round_trip(name):
    """Canonical text parses back to an equal spec."""
    spec = parse_spec(corpus_doc(name))
    again = loads_spec(dumps_spec(spec))
    assert again.annotations == spec.annotations
    assert again.ensembles == spec.ensembles
    assert serialize_spec(again) == serialize_spec(spec)


def test_yaml_matches_json():
    """YAML and JSON encodings of one document parse identically."""
    doc = corpus_doc("temporal-line")
    from_yaml = loads_spec(yaml.safe_dump(doc), yaml_format=True)
    from_json = loads_spec(json.dumps(doc))
    assert serialize_spec(from_yaml) == serialize_spec(from_json)


class TestDefaults:
    """Defaults filled in during parsing."""

    def test_generated_ids(self):
        spec = parse_spec(corpus_doc("text-connector-expr"))
        root = spec.annotations[0]
        assert root.text.id == "anno/0/text"
        assert root.connector.id == "anno/0/connector"
        assert spec.effect_ids() == {"anno/0/text": (0, EffectKind.TEXT), "anno/0/connector": (0, EffectKind.CONNECTOR)}

    def test_style_defaults(self):
        text = parse_spec(corpus_doc("text-connector-expr")).annotations[0].text
        assert text.style.stroke == "#333333"
        assert text.style.font_size == 11
        assert text.style.dash is None

    def test_config_style_applies_under_inline_style(self):
        root = parse_spec(corpus_doc("style-config")).annotations[0]
        assert root.text.style.fill == "#1f77b4"
        assert root.text.style.font_size == 14
        assert root.connector.style.stroke_width == 2

    def test_connector_inherits_text_stroke(self):
        doc = make_spec(
            [{"targets": [PEAK], "text": {"content": "Peak", "style": {"stroke": "#d62728"}}, "connector": {}}]
        )
        assert parse_spec(doc).annotations[0].connector.style.stroke == "#d62728"

    def test_arrow_indicator_defaults_to_end_marker(self):
        root = parse_spec(corpus_doc("indicator-arrow")).annotations[0]
        assert root.indicator.body.markers == Markers.ARROW_END

    def test_enclosure_padding_default(self):
        body = parse_spec(corpus_doc("enclosure-rect")).annotations[0].enclosure.body
        assert body.shape == ShapeKind.RECT
        assert body.padding == 4

    def test_single_target_and_list_forms(self):
        doc = make_spec([{"targets": {"id": "mark/0"}, "text": {"content": "x"}, "enclosure": [{"shape": "ellipse"}]}])
        root = parse_spec(doc).annotations[0]
        assert root.targets == (ByIdTarget(id="mark/0"),)
        assert root.enclosure.body.shape == ShapeKind.ELLIPSE


class TestTargets:
    """Wire forms of each target variant."""

    def test_variants(self):
        doc = make_spec(
            [
                {
                    "targets": [
                        "none",
                        {"id": "mark/1"},
                        {"dataPoint": [3, 1, 3]},
                        {"dataPoint": {"expr": "datum.sales > 200"}},
                        {"axis": {"axis": "x", "parts": "tick-label", "range": ["Mar", "May"]}},
                        {"type": "pixel", "x": 10, "y": 20},
                    ],
                    "text": {"content": "All"},
                }
            ]
        )
        targets = parse_spec(doc).annotations[0].targets
        assert isinstance(targets[0], NoneTarget)
        assert targets[1] == ByIdTarget(id="mark/1")
        assert targets[2] == DataPointTarget(indices=(1, 3))
        assert targets[3].expr == "datum.sales > 200"
        assert isinstance(targets[4], AxisTarget)
        assert targets[4].parts == (AxisPartKind.TICK_LABEL,)
        assert targets[4].range == ("Mar", "May")
        assert isinstance(targets[5], FixedTarget)
        assert targets[5].at.space == "pixel"

    def test_positions(self):
        doc = make_spec(
            [
                {"targets": ["none"], "text": {"content": "a", "position": "upLeft"}},
                {"targets": ["none"], "text": {"content": "b", "position": {"anchor1d": "end", "dy": 3}}},
                {"targets": ["none"], "text": {"content": "c", "position": {"type": "data", "x": "Feb", "y": 100}}},
            ]
        )
        roots = parse_spec(doc).annotations
        assert roots[0].text.body.position == Anchor2D(anchor=Anchor2DKind.UP_LEFT)
        assert isinstance(roots[1].text.body.position, Anchor1D)
        assert roots[1].text.body.position.dy == 3
        assert isinstance(roots[2].text.body.position, FixedPosition)
        assert roots[2].text.body.position.at.x == "Feb"

    def test_unknown_anchor(self):
        doc = make_spec([{"targets": ["none"], "text": {"content": "a", "position": "sideways"}}])
        assert _error(doc).path == "/annotations/0/text/position"

    def test_domain_part_not_targetable(self):
        doc = make_spec([{"targets": [{"axis": {"axis": "x", "parts": ["domain"]}}], "text": {"content": "x"}}])
        assert _error(doc).path.startswith("/annotations/0/targets/0/axis")

    def test_data_point_needs_predicate(self):
        doc = make_spec([{"targets": [{"dataPoint": "datum.sales"}], "text": {"content": "x"}}])
        assert _error(doc, ExprTypeError).path == "/annotations/0/targets/0/dataPoint"

    def test_data_point_unknown_field(self):
        doc = make_spec([{"targets": [{"dataPoint": {"expr": "datum.revenue > 1"}}], "text": {"content": "x"}}])
        assert _error(doc, UnknownField).path == "/annotations/0/targets/0/dataPoint/expr"

    def test_data_point_bad_string_escape(self):
        doc = make_spec([{"targets": [{"dataPoint": 'datum.month == "\\q"'}], "text": {"content": "x"}}])
        err = _error(doc, ExprSyntaxError)
        assert err.code == "SyntaxError"
        assert err.path == "/annotations/0/targets/0/dataPoint"

    def test_pixel_target_needs_numbers(self):
        doc = make_spec([{"targets": [{"type": "pixel", "x": "a", "y": 1}], "text": {"content": "x"}}])
        assert _error(doc).path.startswith("/annotations/0/targets/0")

    def test_unrecognised_target(self):
        doc = make_spec([{"targets": [{"row": 3}], "text": {"content": "x"}}])
        assert _error(doc).path == "/annotations/0/targets/0"


class TestErrors:
    """Structural errors carry a JSON pointer."""

    def test_unknown_envelope_key(self):
        doc = {**make_spec(), "charts": {}}
        assert _error(doc).path == "/charts"

    def test_unknown_root_key(self):
        doc = make_spec([{"targets": ["none"], "txt": {"content": "x"}}])
        assert _error(doc).path == "/annotations/0/txt"

    def test_unknown_effect_key(self):
        doc = make_spec([{"targets": ["none"], "text": {"content": "x", "colour": "red"}}])
        assert _error(doc).path == "/annotations/0/text/colour"

    def test_bad_style_value(self):
        doc = make_spec([{"targets": ["none"], "text": {"content": "x", "style": {"stroke": "red"}}}])
        assert _error(doc).path == "/annotations/0/text/style/stroke"

    def test_missing_chart(self):
        doc = make_spec()
        del doc["chart"]
        assert _error(doc).path == "/chart"

    def test_chart_error_path(self):
        doc = make_spec(mark="pie")
        assert _error(doc).path == "/chart/mark"

    def test_encoding_error(self):
        doc = make_spec(encoding={"x": {"field": "nope", "type": "nominal"}, "y": {"field": "sales", "type": "quantitative"}})
        assert _error(doc, EncodingError).path == "/chart/encoding/x/field"

    def test_empty_targets(self):
        doc = make_spec([{"targets": [], "text": {"content": "x"}}])
        assert _error(doc, EmptyTargets).path == "/annotations/0/targets"

    def test_no_effect(self):
        doc = make_spec([{"targets": ["none"]}])
        assert _error(doc).path == "/annotations/0"

    def test_two_effects_of_one_type_as_list(self):
        doc = make_spec([{"targets": ["none"], "text": [{"content": "a"}, {"content": "b"}]}])
        assert _error(doc, MultipleEffectsOfType).path == "/annotations/0/text"

    def test_two_effects_of_one_type_as_duplicate_key(self):
        base = json.dumps(make_spec())
        text = base.replace(
            '"annotations": []',
            '"annotations": [{"targets": ["none"], "text": {"content": "a"}, "text": {"content": "b"}}]',
        )
        with pytest.raises(MultipleEffectsOfType) as info:
            loads_spec(text)
        assert info.value.path == "/annotations/0/text"

    def test_duplicate_key_elsewhere(self):
        base = json.dumps(make_spec())
        text = base.replace('"mark": "bar"', '"mark": "bar", "mark": "line"')
        with pytest.raises(SchemaError) as info:
            loads_spec(text)
        assert info.value.path == "/chart/mark"

    def test_duplicate_effect_id(self):
        doc = make_spec(
            [
                {"targets": ["none"], "text": {"id": "a", "content": "x"}},
                {"targets": ["none"], "text": {"id": "a", "content": "y"}},
            ]
        )
        assert _error(doc, DuplicateId).path == "/annotations/1/text/id"

    def test_composite_id_collides_with_effect(self):
        doc = make_spec(
            [{"targets": ["none"], "text": {"id": "a", "content": "x"}}],
            [{"type": "composite", "id": "a", "members": ["a"]}],
        )
        assert _error(doc, DuplicateId).path == "/ensembles/0/id"

    def test_unknown_ensemble_type(self):
        doc = make_spec([{"targets": ["none"], "text": {"content": "x"}}], [{"type": "group"}])
        assert _error(doc).path == "/ensembles/0/type"

    def test_path_enclosure_needs_moveto(self):
        doc = make_spec([{"targets": [{"dataPoint": [0]}], "enclosure": {"shape": {"path": "L1,1"}}}])
        assert _error(doc).path == "/annotations/0/enclosure/shape"

    def test_indicator_level_must_not_read_datum(self):
        doc = make_spec([{"targets": ["none"], "indicator": {"kind": "line", "expr": "datum.sales"}}])
        assert _error(doc, ExprTypeError).path == "/annotations/0/indicator/expr"

    def test_indicator_level_type_follows_axis(self):
        doc = make_spec([{"targets": ["none"], "indicator": {"kind": "line", "axis": "y", "expr": "'Jun'"}}])
        assert _error(doc, ExprTypeError).path == "/annotations/0/indicator/expr"

    def test_indicator_pair_only_for_area(self):
        doc = make_spec([{"targets": ["none"], "indicator": {"kind": "line", "expr": ["1", "2"]}}])
        assert _error(doc).path == "/annotations/0/indicator"

    def test_trend_needs_predicate(self):
        doc = make_spec([{"targets": ["none"], "indicator": {"kind": "trend", "expr": "mean(sales)"}}], mark="line")
        assert _error(doc, ExprTypeError).path == "/annotations/0/indicator/expr"

    def test_invalid_json(self):
        with pytest.raises(SchemaError):
            loads_spec("{")

    def test_missing_spec_file(self, tmp_path):
        with pytest.raises(SpecIOError) as info:
            load_spec(tmp_path / "absent.json")
        assert info.value.exit_status == 2


def test_data_url_resolves_against_spec_dir(tmp_path):
    """Relative data urls are read from the spec's directory."""
    (tmp_path / "rows.csv").write_text("month,sales\nJan,1\nFeb,2\n", encoding="utf-8")
    doc = make_spec()
    doc["data"] = {"url": "rows.csv"}
    doc["chart"]["encoding"]["x"].pop("scale")
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    spec = load_spec(path)
    assert spec.table.row_count == 2
    assert spec.data.url == "rows.csv"


def test_data_override_keeps_parse_hints(tmp_path):
    """A replacement data file is typed by the spec's parse hints."""
    override = tmp_path / "other.csv"
    override.write_text("month,sales,day\nJan,1,2024-01-01\nFeb,2,2024-02-01\n", encoding="utf-8")
    doc = make_spec()
    doc["data"]["parse"] = {"day": "string"}
    doc["chart"]["encoding"]["x"].pop("scale", None)
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    spec = load_spec(path, data_override=override)
    assert spec.table.row_count == 2
    assert spec.table.column_type("day") == ColumnType.STRING
    assert spec.table.value(0, "day") == "2024-01-01"


def test_corpus_covers_each_effect():
    """The shared corpus exercises all four effect kinds."""
    kinds = set()
    for _, doc in CORPUS:
        for root in doc["annotations"]:
            kinds.update(k for k in ("text", "enclosure", "connector", "indicator") if k in root)
    assert kinds == {"text", "enclosure", "connector", "indicator"}
