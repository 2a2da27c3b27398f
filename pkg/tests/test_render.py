"""Tests for SVG output."""

import re
import xml.etree.ElementTree as ET

import pytest

from chartnotes.render import LAYERS, SvgRenderer, fmt, render_svg

from .corpus import corpus_doc, corpus_ids, make_spec

SVG = "{http://www.w3.org/2000/svg}"
NUMERIC_ATTRS = ("x", "y", "width", "height", "cx", "cy", "r", "rx", "ry", "x1", "y1", "x2", "y2", "stroke-width")
TWO_DECIMALS = re.compile(r"^-?\d+\.\d{2}$")


def _svg(result):
    return ET.fromstring(result.svg())


def _by_id(root, element_id):
    for el in root.iter():
        if el.get("id") == element_id:
            return el
    raise KeyError(element_id)


@pytest.mark.parametrize("name", corpus_ids())
def test_output_is_deterministic_and_well_formed(compile_doc, name):
    """Compiling the same document twice yields identical bytes."""
    first = compile_doc(corpus_doc(name)).svg()
    second = compile_doc(corpus_doc(name)).svg()
    assert first == second
    assert first.startswith(b"<?xml")
    root = ET.fromstring(first)
    assert root.tag == f"{SVG}svg"


def test_layers_always_present(bar_result):
    root = _svg(bar_result)
    layers = [el.get("id") for el in root.findall(f"{SVG}g")]
    assert layers == [f"layer/{name}" for name in LAYERS]
    assert len(_by_id(root, "layer/annotations")) == 0


def test_chart_layers_hold_scene_groups(bar_result):
    root = _svg(bar_result)
    assert _by_id(root, "layer/marks")[0].get("id") == "marks"
    assert {el.get("id") for el in _by_id(root, "layer/axes")} == {"axis/x", "axis/y"}
    assert _by_id(root, "mark/0").tag == f"{SVG}rect"


def test_numbers_use_two_decimals(compile_doc):
    root = _svg(compile_doc(corpus_doc("enclosure-ellipse")))
    checked = 0
    for el in list(root.iter())[1:]:
        for name in NUMERIC_ATTRS:
            value = el.get(name)
            if value is not None:
                assert TWO_DECIMALS.match(value), (el.get("id"), name, value)
                checked += 1
    assert checked > 0


def test_fmt():
    assert fmt(12.5) == "12.50"
    assert fmt(-0.0001) == "0.00"
    assert fmt(3) == "3.00"


def test_annotations_paint_above_chart(compile_doc):
    """Within a root, the enclosure is drawn before the text."""
    result = compile_doc(corpus_doc("enclosure-rect"))
    root = _svg(result)
    order = [el.get("id") for el in root.iter()]
    enclosure, text = (a.id for a in result.annotations)
    assert order.index("layer/annotations") < order.index(enclosure) < order.index(text)


def test_text_is_escaped(compile_doc):
    doc = make_spec([{"targets": [{"dataPoint": [0]}], "text": {"id": "note", "content": "A & B <C>"}}])
    result = compile_doc(doc)
    raw = result.svg().decode("utf-8")
    assert "A &amp; B &lt;C&gt;" in raw
    assert _by_id(ET.fromstring(result.svg()), "note").text == "A & B <C>"


def test_multiline_text_uses_tspans(compile_doc):
    result = compile_doc(corpus_doc("style-config"))
    (text,) = [a for a in result.annotations if a.kind.value == "text"]
    element = _by_id(_svg(result), text.id)
    spans = element.findall(f"{SVG}tspan")
    assert [s.text for s in spans] == ["Peak", "month"]
    assert spans[0].get("dy") == "0.00"
    assert spans[1].get("dy") == fmt(1.2 * 14)
    assert element.get("font-weight") == "bold"


def test_area_band_is_translucent(compile_doc):
    """Unfilled bands use the stroke colour at reduced opacity."""
    result = compile_doc(corpus_doc("indicator-area-pair"))
    (ann,) = result.annotations
    element = _by_id(_svg(result), ann.id)
    assert element.tag == f"{SVG}rect"
    assert element.get("fill") == "#333333"
    assert element.get("opacity") == "0.20"
    assert element.get("stroke") is None


def test_connector_markers_grouped(compile_doc):
    result = compile_doc(corpus_doc("text-connector-expr"))
    connector = next(a for a in result.annotations if a.kind.value == "connector")
    group = _by_id(_svg(result), connector.id)
    assert group.tag == f"{SVG}g"
    assert [child.tag for child in group] == [f"{SVG}polyline", f"{SVG}path"]
    assert group[0].get("fill") == "none"


def test_invisible_nodes_are_not_drawn(compile_doc):
    """Line-chart row boxes exist in the scene but not in the output."""
    result = compile_doc(make_spec(mark="line"))
    ids = {el.get("id") for el in _svg(result).iter()}
    assert "mark/series/0" in ids
    assert "mark/0" not in ids


def test_renderer_without_annotations(bar_result):
    assert render_svg(bar_result.chart_scene) == bar_result.svg()
    document = SvgRenderer().document(bar_result.chart_scene)
    assert (document.width, document.height) == (480, 320)
