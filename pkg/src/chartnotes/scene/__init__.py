"""Scene module initialization."""

from .builder import SceneBuilder, build_scene, text_run
from .graph import (
    INVISIBLE,
    AnnotationNode,
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
    SemanticTag,
    Series,
    container,
    leaf,
)
from .text import TextMetrics, load_metrics, measure_text
from .ticks import format_tick, tick_positions

__all__ = [
    "SceneBuilder",
    "build_scene",
    "text_run",
    "INVISIBLE",
    "AnnotationNode",
    "AxisPart",
    "AxisPartKind",
    "Canvas",
    "ChartPart",
    "ChartPartKind",
    "Group",
    "MarkTag",
    "Paint",
    "PlotArea",
    "SceneGraph",
    "SceneNode",
    "SemanticTag",
    "Series",
    "container",
    "leaf",
    "TextMetrics",
    "load_metrics",
    "measure_text",
    "format_tick",
    "tick_positions",
]
