"""Canonical serialization of parsed specs back to wire form."""

import json
from typing import Any, Dict, Optional

from .models import (
    Anchor1D,
    Anchor2D,
    Annotation,
    AnnotationRoot,
    ByIdTarget,
    ChartPartTarget,
    CompositeEnsemble,
    ConnectorAnn,
    DataPointTarget,
    DataSource,
    EnclosureAnn,
    Ensemble,
    FixedPos,
    FixedTarget,
    NoneTarget,
    Position,
    ShapeKind,
    Spec,
    Target,
    TextAnn,
)


def _fixed(at: FixedPos) -> Dict[str, Any]:
    return {"type": at.space, "x": at.x, "y": at.y}


def _position(pos: Optional[Position]) -> Optional[Dict[str, Any]]:
    if pos is None:
        return None
    if isinstance(pos, Anchor2D):
        out: Dict[str, Any] = {"anchor2d": pos.anchor.value}
    elif isinstance(pos, Anchor1D):
        out = {"anchor1d": pos.anchor.value}
    else:
        out = _fixed(pos.at)
    out["dx"] = pos.dx
    out["dy"] = pos.dy
    return out


def _target(t: Target) -> Any:
    if isinstance(t, NoneTarget):
        return "none"
    if isinstance(t, ByIdTarget):
        return {"id": t.id}
    if isinstance(t, FixedTarget):
        return _fixed(t.at)
    if isinstance(t, ChartPartTarget):
        return {"chartPart": t.part.value}
    if isinstance(t, DataPointTarget):
        if t.expr is not None:
            return {"dataPoint": {"expr": t.expr}}
        return {"dataPoint": {"indices": list(t.indices)}}
    out: Dict[str, Any] = {"axis": t.axis, "parts": [p.value for p in t.parts]}
    if t.range is not None:
        out["range"] = t.range if isinstance(t.range, str) else list(t.range)
    return {"axis": out}


def _body(body: Any) -> Dict[str, Any]:
    if isinstance(body, TextAnn):
        out: Dict[str, Any] = {"content": body.content}
    elif isinstance(body, EnclosureAnn):
        shape: Any = {"path": body.path} if body.shape == ShapeKind.PATH else body.shape.value
        out = {"shape": shape, "padding": body.padding}
    elif isinstance(body, ConnectorAnn):
        out = {"markers": body.markers.value, "interpolation": body.interpolation.value}
        if body.path is not None:
            out["path"] = body.path
    else:
        expr = list(body.expr) if isinstance(body.expr, tuple) else body.expr
        out = {"kind": body.kind.value, "axis": body.axis, "expr": expr, "markers": body.markers.value}
    position = getattr(body, "position", None)
    if position is not None:
        out["position"] = _position(position)
    return out


def _effect(ann: Annotation) -> Dict[str, Any]:
    out = {"id": ann.id, "style": ann.style.model_dump(mode="json", exclude_none=True)}
    out.update(_body(ann.body))
    return out


def _root(root: AnnotationRoot) -> Dict[str, Any]:
    out: Dict[str, Any] = {"targets": [_target(t) for t in root.targets]}
    for kind, ann in root.effects():
        out[kind.value] = _effect(ann)
    return out


def _ensemble(e: Ensemble) -> Dict[str, Any]:
    if isinstance(e, CompositeEnsemble):
        return {"type": "composite", "id": e.id, "members": list(e.members)}
    out: Dict[str, Any] = {"type": "reference", "from": e.from_id, "to": e.to_id}
    if e.connector is not None:
        out["connector"] = _effect(e.connector)
    return out


def _data(source: DataSource) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    if source.url is not None:
        out["url"] = source.url
    else:
        out["values"] = [dict(row) for row in source.values]
    if source.parse:
        out["parse"] = {name: t.value for name, t in source.parse.items()}
    return out


def serialize_spec(spec: Spec) -> Dict[str, Any]:
    """
    Canonical wire form of a spec with every default materialized.

    Args:
        spec: Parsed spec

    Returns:
        JSON-compatible document that parses back to an equal spec
    """
    doc: Dict[str, Any] = {
        "chart": spec.chart.model_dump(mode="json", exclude_none=True),
        "data": _data(spec.data),
        "annotations": [_root(r) for r in spec.annotations],
        "ensembles": [_ensemble(e) for e in spec.ensembles],
    }
    if spec.style_config:
        doc["config"] = {"style": {k.value: dict(v) for k, v in spec.style_config.items()}}
    return doc


def dumps_spec(spec: Spec, indent: int = 2) -> str:
    """Canonical text form: sorted keys, fixed indentation."""
    return json.dumps(serialize_spec(spec), sort_keys=True, indent=indent, ensure_ascii=False) + "\n"
