"""Spec document parsing: wire forms to validated models.

Every error raised here carries a JSON pointer to the offending node.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Type, TypeVar, Union

import yaml
from pydantic import BaseModel, ValidationError

from ..chart import Channel, ChartSpec, EncodingType, validate_encodings
from ..data import ColumnType, DataTable, load_table, parse_temporal, table_from_rows
from ..errors import (
    ChartnotesError,
    DuplicateId,
    EmptyTargets,
    ExprTypeError,
    MultipleEffectsOfType,
    SchemaError,
    SpecIOError,
    json_pointer,
)
from ..expr import Literal as ExprLiteral
from ..expr import ParsedExpr, VType, parse_expr
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
    IndicatorAnn,
    IndicatorKind,
    Markers,
    NoneTarget,
    Position,
    ReferenceEnsemble,
    ShapeKind,
    Spec,
    Style,
    Target,
    TextAnn,
)

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)

ENVELOPE_KEYS = ("chart", "data", "annotations", "ensembles", "config")
ROOT_KEYS = ("targets",) + tuple(k.value for k in EffectKind)
ROOT_PATH = re.compile(r"^/annotations/\d+$")
PYDANTIC_TAGS = {"str", "float", "int", "bool", "list", "dict", "tuple"}

BODY_MODELS: Dict[EffectKind, Type[BaseModel]] = {
    EffectKind.TEXT: TextAnn,
    EffectKind.ENCLOSURE: EnclosureAnn,
    EffectKind.CONNECTOR: ConnectorAnn,
    EffectKind.INDICATOR: IndicatorAnn,
}


class JsonObject(dict):
    """Dict that remembers keys seen more than once while decoding."""

    def __init__(self, pairs: List[Tuple[str, Any]]):
        super().__init__()
        self.duplicates: List[str] = []
        for key, value in pairs:
            if key in self:
                self.duplicates.append(key)
            self[key] = value


class _SpecLoader(yaml.SafeLoader):
    """Safe YAML loader that keeps ISO dates as strings."""


_SpecLoader.yaml_implicit_resolvers = {
    first: [(tag, rx) for tag, rx in resolvers if tag != "tag:yaml.org,2002:timestamp"]
    for first, resolvers in yaml.SafeLoader.yaml_implicit_resolvers.items()
}


def _loc_path(loc: Tuple[Any, ...], rename: Mapping[str, str]) -> List[Any]:
    parts = []
    for item in loc:
        if isinstance(item, str) and ("[" in item or item in PYDANTIC_TAGS):
            continue
        parts.append(rename.get(item, item) if isinstance(item, str) else item)
    return parts


class SpecParser:
    """Translates a decoded spec document into a validated ``Spec``."""

    def __init__(
        self,
        base_dir: Optional[Union[str, Path]] = None,
        table: Optional[DataTable] = None,
        data_path: Optional[Union[str, Path]] = None,
    ):
        """
        Initialize the parser.

        Args:
            base_dir: Directory that relative data urls resolve against
            table: Pre-loaded table overriding the document's data source
            data_path: Data file read in place of the document's data source,
                still typed by the document's ``parse`` hints
        """
        self.base_dir = Path(base_dir) if base_dir else Path(".")
        self.table = table
        self.data_path = Path(data_path) if data_path else None
        self.ids: Dict[str, str] = {}
        self.style_config: Dict[EffectKind, Dict[str, Any]] = {}
        self.chart: Optional[ChartSpec] = None

    # Helpers

    def _model(
        self,
        cls: Type[M],
        payload: Any,
        path: str,
        rename: Optional[Mapping[str, str]] = None,
    ) -> M:
        if not isinstance(payload, dict):
            raise SchemaError(f"Expected an object, got {type(payload).__name__}", path=path)
        try:
            return cls.model_validate(payload)
        except ValidationError as e:
            first = e.errors()[0]
            where = path + json_pointer(_loc_path(first["loc"], rename or {}))
            raise SchemaError(first["msg"], path=where) from e

    def _object(self, raw: Any, path: str, allowed: Tuple[str, ...]) -> Dict[str, Any]:
        if not isinstance(raw, dict):
            raise SchemaError(f"Expected an object, got {type(raw).__name__}", path=path)
        for key in raw:
            if key not in allowed:
                raise SchemaError(f"Unknown key '{key}'", path=f"{path}/{key}")
        return raw

    def _check_duplicates(self, node: Any, path: str) -> None:
        if isinstance(node, JsonObject) and node.duplicates:
            key = node.duplicates[0]
            if ROOT_PATH.match(path) and key in ROOT_KEYS[1:]:
                raise MultipleEffectsOfType(
                    f"More than one '{key}' effect in one annotation", path=f"{path}/{key}"
                )
            raise SchemaError(f"Duplicate key '{key}'", path=f"{path}/{key}")
        if isinstance(node, dict):
            for key, value in node.items():
                self._check_duplicates(value, f"{path}/{key}")
        elif isinstance(node, list):
            for i, value in enumerate(node):
                self._check_duplicates(value, f"{path}/{i}")

    def _register_id(self, ann_id: str, path: str) -> None:
        if ann_id in self.ids:
            raise DuplicateId(f"Id '{ann_id}' is already used at {self.ids[ann_id]}", path=path)
        self.ids[ann_id] = path

    def _expr(self, src: Any, path: str, schema: Mapping[str, ColumnType]) -> ParsedExpr:
        if not isinstance(src, str):
            raise SchemaError("Expected an expression string", path=path)
        try:
            return parse_expr(src, schema)
        except ChartnotesError as e:
            e.path = e.path or path
            raise

    @property
    def schema(self) -> Dict[str, ColumnType]:
        return self.table.schema

    def _axis_schema(self, axis: str) -> Dict[str, ColumnType]:
        field = self.chart.encoding[Channel(axis)].field
        return {**self.schema, "value": self.table.column_type(field)}

    # Envelope

    def parse(self, doc: Any) -> Spec:
        if not isinstance(doc, dict):
            raise SchemaError("A spec must be a JSON object")
        self._check_duplicates(doc, "")
        self._object(doc, "", ENVELOPE_KEYS)
        if "chart" not in doc:
            raise SchemaError("Missing required key 'chart'", path="/chart")
        if "data" not in doc:
            raise SchemaError("Missing required key 'data'", path="/data")

        self.chart = self._model(ChartSpec, doc["chart"], "/chart")
        source = self._data_source(doc["data"])
        if self.table is None:
            self.table = self._load_data(source)
        validate_encodings(self.chart, self.table)
        self.style_config = self._config(doc.get("config", {}))

        raw_roots = doc.get("annotations", [])
        if not isinstance(raw_roots, list):
            raise SchemaError("'annotations' must be a list", path="/annotations")
        roots = tuple(self._root(raw, i) for i, raw in enumerate(raw_roots))

        raw_ensembles = doc.get("ensembles", [])
        if not isinstance(raw_ensembles, list):
            raise SchemaError("'ensembles' must be a list", path="/ensembles")
        ensembles = tuple(self._ensemble(raw, k) for k, raw in enumerate(raw_ensembles))

        spec = Spec(
            chart=self.chart,
            data=source,
            annotations=roots,
            ensembles=ensembles,
            style_config=self.style_config,
            table=self.table,
        )
        logger.debug(f"Parsed spec with {len(roots)} annotation(s) and {len(ensembles)} ensemble(s)")
        return spec

    def _data_source(self, raw: Any) -> DataSource:
        self._object(raw, "/data", ("url", "values", "parse"))
        values = raw.get("values")
        if values is not None and not isinstance(values, list):
            raise SchemaError("'values' must be a list of objects", path="/data/values")
        return self._model(DataSource, raw, "/data")

    def _load_data(self, source: DataSource) -> DataTable:
        hints = dict(source.parse)
        if self.data_path is not None:
            return load_table(self.data_path, hints)
        if source.values is not None:
            try:
                return table_from_rows([dict(r) for r in source.values], hints)
            except ChartnotesError as e:
                e.path = "/data/values" + e.path
                raise
        path = Path(source.url)
        if not path.is_absolute():
            path = self.base_dir / path
        return load_table(path, hints)

    def _config(self, raw: Any) -> Dict[EffectKind, Dict[str, Any]]:
        self._object(raw, "/config", ("style",))
        styles = self._object(raw.get("style", {}), "/config/style", tuple(k.value for k in EffectKind))
        config = {}
        for kind, partial in styles.items():
            path = f"/config/style/{kind}"
            self._model(Style, partial, path)
            config[EffectKind(kind)] = dict(partial)
        return config

    # Annotation roots

    def _root(self, raw: Any, index: int) -> AnnotationRoot:
        path = f"/annotations/{index}"
        self._object(raw, path, ROOT_KEYS)
        targets = raw.get("targets")
        if targets is None or targets == []:
            raise EmptyTargets("An annotation needs at least one target", path=f"{path}/targets")
        if not isinstance(targets, list):
            targets = [targets]
        parsed_targets = tuple(self._target(t, f"{path}/targets/{j}") for j, t in enumerate(targets))

        effects: Dict[str, Annotation] = {}
        text_stroke = None
        for kind in (EffectKind.TEXT, EffectKind.ENCLOSURE, EffectKind.CONNECTOR, EffectKind.INDICATOR):
            raw_effect = raw.get(kind.value)
            if raw_effect is None:
                continue
            if isinstance(raw_effect, list):
                if len(raw_effect) > 1:
                    raise MultipleEffectsOfType(
                        f"More than one '{kind.value}' effect in one annotation",
                        path=f"{path}/{kind.value}",
                    )
                if not raw_effect:
                    continue
                raw_effect = raw_effect[0]
            ann = self._effect(kind, raw_effect, f"{path}/{kind.value}", f"anno/{index}/{kind.value}", text_stroke)
            if kind == EffectKind.TEXT:
                text_stroke = ann.style.stroke
            effects[kind.value] = ann

        if not effects:
            raise SchemaError(
                "An annotation needs at least one of text, enclosure, connector, indicator", path=path
            )
        return AnnotationRoot(targets=parsed_targets, **effects)

    def _effect(
        self,
        kind: EffectKind,
        raw: Any,
        path: str,
        default_id: str,
        text_stroke: Optional[str] = None,
    ) -> Annotation:
        if not isinstance(raw, dict):
            raise SchemaError(f"'{kind.value}' must be an object", path=path)
        payload = dict(raw)
        ann_id = payload.pop("id", None)
        if ann_id is None:
            ann_id = default_id
        elif not isinstance(ann_id, str) or not ann_id:
            raise SchemaError("'id' must be a non-empty string", path=f"{path}/id")
        self._register_id(ann_id, f"{path}/id")
        style = self._style(kind, payload.pop("style", {}), f"{path}/style", text_stroke)

        rename: Dict[str, str] = {}
        if "position" in payload:
            payload["position"] = self._position(payload["position"], f"{path}/position")
        if kind == EffectKind.ENCLOSURE and isinstance(payload.get("shape"), dict):
            shape = self._object(payload["shape"], f"{path}/shape", ("path",))
            payload["shape"] = ShapeKind.PATH
            payload["path"] = shape.get("path")
            rename["path"] = "shape"
        if kind == EffectKind.INDICATOR:
            if isinstance(payload.get("expr"), list):
                payload["expr"] = tuple(payload["expr"])
            if "markers" not in payload and payload.get("kind") == IndicatorKind.ARROW.value:
                payload["markers"] = Markers.ARROW_END

        body_cls = BODY_MODELS[kind]
        body = self._model(body_cls, payload, path, rename)
        if kind == EffectKind.INDICATOR:
            self._check_indicator(body, path)
        return Annotation[body_cls](id=ann_id, style=style, body=body)

    def _style(
        self, kind: EffectKind, inline: Any, path: str, text_stroke: Optional[str]
    ) -> Style:
        if not isinstance(inline, dict):
            raise SchemaError("'style' must be an object", path=path)
        merged: Dict[str, Any] = {}
        if kind == EffectKind.CONNECTOR:
            merged["stroke"] = text_stroke or self.style_config.get(EffectKind.TEXT, {}).get(
                "stroke", Style().stroke
            )
        merged.update(self.style_config.get(kind, {}))
        merged.update(inline)
        return self._model(Style, merged, path)

    def _position(self, raw: Any, path: str) -> Optional[Position]:
        if raw is None:
            return None
        if isinstance(raw, str):
            return self._anchor_by_value(raw, {}, path)
        self._object(raw, path, ("anchor2d", "anchor1d", "anchor", "type", "x", "y", "dx", "dy"))
        offsets = {k: raw[k] for k in ("dx", "dy") if k in raw}
        if "anchor2d" in raw:
            return self._model(Anchor2D, {"anchor": raw["anchor2d"], **offsets}, path, {"anchor": "anchor2d"})
        if "anchor1d" in raw:
            return self._model(Anchor1D, {"anchor": raw["anchor1d"], **offsets}, path, {"anchor": "anchor1d"})
        if "anchor" in raw:
            return self._anchor_by_value(raw["anchor"], offsets, f"{path}/anchor")
        if "type" in raw:
            at = self._model(FixedPos, {"space": raw["type"], "x": raw.get("x"), "y": raw.get("y")}, path, {"space": "type"})
            return self._model(FixedPosition, {"at": at, **offsets}, path)
        raise SchemaError("A position needs an anchor or a fixed point", path=path)

    def _anchor_by_value(self, value: Any, offsets: Dict[str, Any], path: str) -> Position:
        two_d = {k.value for k in Anchor2DKind}
        one_d = {k.value for k in Anchor1DKind} - {"auto"}
        if value in two_d:
            return self._model(Anchor2D, {"anchor": value, **offsets}, path)
        if value in one_d:
            return self._model(Anchor1D, {"anchor": value, **offsets}, path)
        raise SchemaError(f"Unknown anchor '{value}'", path=path)

    # Targets

    def _target(self, raw: Any, path: str) -> Target:
        if raw is None or raw == "none":
            return NoneTarget()
        if not isinstance(raw, dict):
            raise SchemaError(f"Unrecognised target {raw!r}", path=path)
        keys = set(raw)
        if keys == {"id"}:
            return self._model(ByIdTarget, raw, path)
        if keys == {"chartPart"}:
            return self._model(ChartPartTarget, {"part": raw["chartPart"]}, path, {"part": "chartPart"})
        if keys == {"dataPoint"}:
            return self._data_point(raw["dataPoint"], f"{path}/dataPoint")
        if keys == {"axis"}:
            return self._axis(raw["axis"], f"{path}/axis")
        if "type" in keys and keys <= {"type", "x", "y"}:
            at = self._model(FixedPos, {"space": raw["type"], "x": raw.get("x"), "y": raw.get("y")}, path, {"space": "type"})
            return FixedTarget(at=at)
        raise SchemaError(f"Unrecognised target with keys {sorted(keys)}", path=path)

    def _data_point(self, raw: Any, path: str) -> DataPointTarget:
        if isinstance(raw, list):
            raw = {"indices": raw}
            expr_path = path
        elif isinstance(raw, str):
            raw = {"expr": raw}
            expr_path = path
        else:
            expr_path = f"{path}/expr"
        target = self._model(DataPointTarget, raw, path)
        if target.expr is not None:
            parsed = self._expr(target.expr, expr_path, self.schema)
            if not parsed.is_predicate:
                raise ExprTypeError("A dataPoint expression must be a predicate", path=expr_path)
        return target

    def _axis(self, raw: Any, path: str) -> AxisTarget:
        payload = dict(self._object(raw, path, ("axis", "parts", "range")))
        if isinstance(payload.get("parts"), str):
            payload["parts"] = [payload["parts"]]
        if isinstance(payload.get("range"), list):
            if len(payload["range"]) != 2:
                raise SchemaError("An axis range needs exactly two bounds", path=f"{path}/range")
            payload["range"] = tuple(payload["range"])
        target = self._model(AxisTarget, payload, path)
        if isinstance(target.range, str):
            parsed = self._expr(target.range, f"{path}/range", self._axis_schema(target.axis))
            if not parsed.is_predicate:
                raise ExprTypeError("An axis range expression must be a predicate", path=f"{path}/range")
        return target

    # Indicators

    def _check_indicator(self, body: IndicatorAnn, path: str) -> None:
        if body.kind == IndicatorKind.TREND:
            parsed = self._expr(body.expr, f"{path}/expr", self.schema)
            if not parsed.is_predicate:
                raise ExprTypeError("A trend indicator takes a row predicate", path=f"{path}/expr")
            return
        if isinstance(body.expr, tuple):
            for k, src in enumerate(body.expr):
                self._constant(src, f"{path}/expr/{k}", body.axis)
            return
        if body.kind == IndicatorKind.AREA:
            parsed = self._expr(body.expr, f"{path}/expr", self._axis_schema(body.axis))
            if not parsed.is_predicate:
                raise ExprTypeError(
                    "An area indicator takes [lo, hi] or a predicate over datum.value",
                    path=f"{path}/expr",
                )
            return
        self._constant(body.expr, f"{path}/expr", body.axis)

    def _constant(self, src: str, path: str, axis: str) -> ParsedExpr:
        parsed = self._expr(src, path, self.schema)
        if parsed.references_datum:
            raise ExprTypeError("An indicator level must not read datum fields", path=path)
        if parsed.is_predicate:
            raise ExprTypeError("An indicator level must be a value, not a predicate", path=path)
        enc = self.chart.encoding[Channel(axis)]
        if enc.type == EncodingType.QUANTITATIVE and parsed.vtype != VType.NUMBER:
            raise ExprTypeError(f"The {axis} axis is quantitative; the level must be a number", path=path)
        if enc.type == EncodingType.TEMPORAL and parsed.vtype not in (VType.TEMPORAL, VType.STRING):
            raise ExprTypeError(f"The {axis} axis is temporal; the level must be a date", path=path)
        if enc.type == EncodingType.TEMPORAL and isinstance(parsed.root, ExprLiteral) and parsed.vtype == VType.STRING:
            if parse_temporal(parsed.root.value) is None:
                raise ExprTypeError(f"'{parsed.root.value}' is not an ISO-8601 date", path=path)
        return parsed

    # Ensembles

    def _ensemble(self, raw: Any, index: int) -> Ensemble:
        path = f"/ensembles/{index}"
        if not isinstance(raw, dict):
            raise SchemaError("An ensemble must be an object", path=path)
        kind = raw.get("type")
        if kind == "reference":
            self._object(raw, path, ("type", "from", "to", "connector"))
            connector = None
            if raw.get("connector") is not None:
                connector = self._effect(
                    EffectKind.CONNECTOR, raw["connector"], f"{path}/connector", f"ensemble/{index}/connector"
                )
            return self._model(
                ReferenceEnsemble,
                {"from_id": raw.get("from"), "to_id": raw.get("to"), "connector": connector},
                path,
                {"from_id": "from", "to_id": "to"},
            )
        if kind == "composite":
            self._object(raw, path, ("type", "id", "members"))
            ensemble = self._model(
                CompositeEnsemble, {"id": raw.get("id"), "members": raw.get("members")}, path
            )
            self._register_id(ensemble.id, f"{path}/id")
            return ensemble
        raise SchemaError(f"Unknown ensemble type {kind!r}", path=f"{path}/type")


def parse_spec(
    doc: Any,
    base_dir: Optional[Union[str, Path]] = None,
    table: Optional[DataTable] = None,
    data_path: Optional[Union[str, Path]] = None,
) -> Spec:
    """
    Validate a decoded spec document.

    Args:
        doc: Decoded JSON/YAML document
        base_dir: Directory for relative data urls
        table: Optional table overriding the document's data
        data_path: Optional data file overriding the document's data source

    Returns:
        Spec with defaults filled, ids generated and expressions checked
    """
    return SpecParser(base_dir, table, data_path).parse(doc)


def loads_spec(
    text: str,
    base_dir: Optional[Union[str, Path]] = None,
    table: Optional[DataTable] = None,
    yaml_format: bool = False,
    data_path: Optional[Union[str, Path]] = None,
) -> Spec:
    """Decode spec text (JSON, or YAML when ``yaml_format``) and parse it."""
    try:
        if yaml_format:
            doc = yaml.load(text, Loader=_SpecLoader)
        else:
            doc = json.loads(text, object_pairs_hook=JsonObject)
    except json.JSONDecodeError as e:
        raise SchemaError(f"Invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from e
    except yaml.YAMLError as e:
        raise SchemaError(f"Invalid YAML: {e}") from e
    return parse_spec(doc, base_dir, table, data_path)


def load_spec(path: Union[str, Path], data_override: Optional[Union[str, Path]] = None) -> Spec:
    """
    Read and parse a spec file.

    Args:
        path: ``.json``, ``.yaml`` or ``.yml`` spec file
        data_override: Data file replacing the spec's data source; the
            spec's ``parse`` hints still apply to it

    Returns:
        Parsed spec
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise SpecIOError(f"Cannot read spec file {path}: {e}") from e
    yaml_format = path.suffix.lower() in (".yaml", ".yml")
    return loads_spec(text, base_dir=path.parent, yaml_format=yaml_format, data_path=data_override)
