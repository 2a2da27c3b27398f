"""SVG serialization of a compiled (and annotated) scene graph."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple

from jinja2 import Environment, FileSystemLoader

from ..geometry import (
    Circle,
    Ellipse,
    Line,
    Polygon,
    Polyline,
    RectShape,
    Shape,
    SvgPath,
    TextRun,
)
from ..scene import Paint, SceneGraph, SceneNode

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).with_name("templates")
DOCUMENT_TEMPLATE = "document.svg.j2"
FONT_FAMILY = "Helvetica, Arial, sans-serif"
LAYERS = ("grid", "marks", "axes", "chart", "annotations")

Attrs = List[Tuple[str, str]]


def fmt(v: float) -> str:
    """Fixed two-decimal formatting; negative zero prints as zero."""
    text = f"{float(v):.2f}"
    return "0.00" if text == "-0.00" else text


def _points(points: Sequence[Tuple[float, float]]) -> str:
    return " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)


@dataclass
class SvgElement:
    tag: str
    attrs: Attrs
    children: List["SvgElement"] = field(default_factory=list)
    text: Optional[str] = None

    def walk(self) -> Iterator["SvgElement"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class SvgDocument:
    """Layered element tree ready for serialization."""
    width: int
    height: int
    layers: List[SvgElement]

    def elements(self) -> Iterator[SvgElement]:
        for layer in self.layers:
            yield from layer.walk()


def layer_of(node: SceneNode) -> str:
    """Layer for a top-level scene node."""
    if node.id == "marks":
        return "marks"
    if node.id.startswith("axis/"):
        return "axes"
    if node.id.startswith("chart/"):
        return "chart"
    if node.id == "annotations":
        return "annotations"
    return "grid"


def _paint_attrs(paint: Paint) -> Attrs:
    attrs = [("fill", paint.fill)]
    if paint.stroke != "none":
        attrs += [("stroke", paint.stroke), ("stroke-width", fmt(paint.stroke_width))]
        if paint.dash:
            attrs.append(("stroke-dasharray", " ".join(fmt(d) for d in paint.dash)))
    if paint.opacity != 1.0:
        attrs.append(("opacity", fmt(paint.opacity)))
    return attrs


def _text(node_id: str, run: TextRun, paint: Paint) -> SvgElement:
    attrs = [
        ("id", node_id),
        ("x", fmt(run.x)),
        ("y", fmt(run.y)),
        ("font-size", fmt(run.font_size)),
        ("text-anchor", run.anchor),
    ]
    if paint.font_weight != "normal":
        attrs.append(("font-weight", paint.font_weight))
    if run.rotate:
        attrs.append(("transform", f"rotate({fmt(run.rotate)} {fmt(run.x)} {fmt(run.y)})"))
    attrs += _paint_attrs(paint)
    if len(run.lines) == 1:
        return SvgElement("text", attrs, text=run.lines[0])
    spans = [
        SvgElement("tspan", [("x", fmt(run.x)), ("dy", fmt(0 if k == 0 else run.line_height))], text=line)
        for k, line in enumerate(run.lines)
    ]
    return SvgElement("text", attrs, spans)


def shape_element(node_id: str, shape: Shape, paint: Paint) -> SvgElement:
    """Element for one primitive; ``id`` always comes first."""
    if isinstance(shape, TextRun):
        return _text(node_id, shape, paint)
    if isinstance(shape, RectShape):
        tag, attrs = "rect", [("x", fmt(shape.x)), ("y", fmt(shape.y)), ("width", fmt(shape.w)), ("height", fmt(shape.h))]
    elif isinstance(shape, Circle):
        tag, attrs = "circle", [("cx", fmt(shape.cx)), ("cy", fmt(shape.cy)), ("r", fmt(shape.r))]
    elif isinstance(shape, Ellipse):
        tag, attrs = "ellipse", [
            ("cx", fmt(shape.cx)), ("cy", fmt(shape.cy)), ("rx", fmt(shape.rx)), ("ry", fmt(shape.ry))
        ]
    elif isinstance(shape, Line):
        tag, attrs = "line", [("x1", fmt(shape.x1)), ("y1", fmt(shape.y1)), ("x2", fmt(shape.x2)), ("y2", fmt(shape.y2))]
    elif isinstance(shape, Polyline):
        tag, attrs = "polyline", [("points", _points(shape.points))]
    elif isinstance(shape, Polygon):
        first, *rest = shape.points
        d = f"M{fmt(first[0])},{fmt(first[1])}" + "".join(f" L{fmt(x)},{fmt(y)}" for x, y in rest) + " Z"
        tag, attrs = "path", [("d", d)]
    else:
        tag, attrs = "path", [("d", shape.d)]
        if shape.box is not None:
            b = shape.box
            attrs += [
                ("transform", f"translate({fmt(b.x)} {fmt(b.y)}) scale({fmt(b.w)} {fmt(b.h)})"),
                ("vector-effect", "non-scaling-stroke"),
            ]
    return SvgElement(tag, [("id", node_id)] + attrs + _paint_attrs(paint))


def node_element(node: SceneNode) -> Optional[SvgElement]:
    """Element subtree for a scene node; None when nothing in it is visible."""
    if node.children:
        children = [e for e in (node_element(c) for c in node.children) if e is not None]
        if not children:
            return None
        return SvgElement("g", [("id", node.id)], children)
    if node.geometry is None or not node.paint.visible:
        return None
    return shape_element(node.id, node.geometry, node.paint)


class SvgRenderer:
    """Builds and serializes SVG documents from scene graphs."""

    def __init__(self, template_dir: Optional[Path] = None):
        """
        Initialize the renderer.

        Args:
            template_dir: Directory holding the document template
        """
        self.env = Environment(
            loader=FileSystemLoader(str(template_dir or TEMPLATE_DIR)),
            autoescape=True,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )

    def document(self, scene: SceneGraph) -> SvgDocument:
        layers = {name: SvgElement("g", [("id", f"layer/{name}")]) for name in LAYERS}
        for node in scene.root.children:
            element = node_element(node)
            if element is not None:
                layers[layer_of(node)].children.append(element)
        return SvgDocument(scene.width, scene.height, [layers[name] for name in LAYERS])

    def render(self, scene: SceneGraph) -> str:
        doc = self.document(scene)
        template = self.env.get_template(DOCUMENT_TEMPLATE)
        text = template.render(width=doc.width, height=doc.height, layers=doc.layers, font_family=FONT_FAMILY)
        logger.debug(f"Rendered SVG with {sum(1 for _ in doc.elements())} element(s)")
        return text


def render_svg(scene: SceneGraph, annotations: Sequence = ()) -> bytes:
    """
    Serialize a scene and its annotations as SVG.

    Args:
        scene: Compiled chart scene
        annotations: Assembled annotations, painted above the chart in order

    Returns:
        UTF-8 SVG bytes, identical for identical inputs
    """
    if annotations:
        from ..layout import attach_annotations

        scene = attach_annotations(scene, annotations)
    return SvgRenderer().render(scene).encode("utf-8")
