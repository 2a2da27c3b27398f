"""Annotation grammar: models, parsing and canonical serialization."""

from .models import (
    Anchor1D,
    Anchor1DKind,
    Anchor2D,
    Anchor2DKind,
    Annotation,
    AnnotationRoot,
    AxisTarget,
    ByIdTarget,
    ChartPartTarget,
    CompositeEnsemble,
    ConnectorAnn,
    DataPointTarget,
    DataSource,
    EffectKind,
    EnclosureAnn,
    Ensemble,
    FixedPos,
    FixedPosition,
    FixedTarget,
    FontWeight,
    IndicatorAnn,
    IndicatorKind,
    Interpolation,
    Markers,
    NoneTarget,
    Position,
    ReferenceEnsemble,
    ShapeKind,
    Spec,
    Style,
    Target,
    TextAnchor,
    TextAnn,
)
from .parser import JsonObject, SpecParser, load_spec, loads_spec, parse_spec
from .serializer import dumps_spec, serialize_spec

__all__ = [
    "Anchor1D",
    "Anchor1DKind",
    "Anchor2D",
    "Anchor2DKind",
    "Annotation",
    "AnnotationRoot",
    "AxisTarget",
    "ByIdTarget",
    "ChartPartTarget",
    "CompositeEnsemble",
    "ConnectorAnn",
    "DataPointTarget",
    "DataSource",
    "EffectKind",
    "EnclosureAnn",
    "Ensemble",
    "FixedPos",
    "FixedPosition",
    "FixedTarget",
    "FontWeight",
    "IndicatorAnn",
    "IndicatorKind",
    "Interpolation",
    "Markers",
    "NoneTarget",
    "Position",
    "ReferenceEnsemble",
    "ShapeKind",
    "Spec",
    "Style",
    "Target",
    "TextAnchor",
    "TextAnn",
    "JsonObject",
    "SpecParser",
    "load_spec",
    "loads_spec",
    "parse_spec",
    "dumps_spec",
    "serialize_spec",
]
