"""Annotation grammar data models."""

from enum import Enum
from typing import Any, Dict, Generic, List, Literal, Optional, Tuple, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..chart import ChartSpec
from ..config import settings
from ..data import ColumnType, DataTable
from ..geometry import parse_path_data
from ..scene import AxisPartKind, ChartPartKind

HEX_COLOR = r"^#[0-9A-Fa-f]{6}$"
PAINT = r"^(none|#[0-9A-Fa-f]{6})$"

Coord = Union[float, str]


class StrictModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class EffectKind(str, Enum):
    """Annotation effect types, in paint order within a root."""
    ENCLOSURE = "enclosure"
    CONNECTOR = "connector"
    INDICATOR = "indicator"
    TEXT = "text"


class FontWeight(str, Enum):
    NORMAL = "normal"
    BOLD = "bold"


class TextAnchor(str, Enum):
    START = "start"
    MIDDLE = "middle"
    END = "end"


class Style(StrictModel):
    """Visual style of an annotation effect."""
    stroke: str = Field("#333333", pattern=HEX_COLOR)
    stroke_width: float = Field(1.0, ge=0)
    fill: str = Field("none", pattern=PAINT)
    opacity: float = Field(1.0, ge=0, le=1)
    font_size: float = Field(11.0, gt=0)
    font_weight: FontWeight = FontWeight.NORMAL
    text_anchor: TextAnchor = TextAnchor.START
    dash: Optional[Tuple[float, ...]] = None

    @field_validator("dash")
    @classmethod
    def _dash_positive(cls, value: Optional[Tuple[float, ...]]) -> Optional[Tuple[float, ...]]:
        if value is not None and (not value or any(v < 0 for v in value)):
            raise ValueError("dash must be a non-empty list of non-negative lengths")
        return value


# Placement

class Anchor2DKind(str, Enum):
    AUTO = "auto"
    UP_LEFT = "upLeft"
    UP = "up"
    UP_RIGHT = "upRight"
    MID_LEFT = "midLeft"
    MID_RIGHT = "midRight"
    DOWN_LEFT = "downLeft"
    DOWN = "down"
    DOWN_RIGHT = "downRight"
    CENTER = "center"


class Anchor1DKind(str, Enum):
    AUTO = "auto"
    START = "start"
    MID = "mid"
    END = "end"


class FixedPos(StrictModel):
    """Point in data space (through the scales) or plot-area pixel space."""
    space: Literal["data", "pixel"]
    x: Coord
    y: Coord

    @model_validator(mode="after")
    def _pixel_numbers(self) -> "FixedPos":
        if self.space == "pixel" and (isinstance(self.x, str) or isinstance(self.y, str)):
            raise ValueError("pixel coordinates must be numbers")
        return self


class Anchor2D(StrictModel):
    anchor: Anchor2DKind = Anchor2DKind.AUTO
    dx: float = 0.0
    dy: float = 0.0


class Anchor1D(StrictModel):
    anchor: Anchor1DKind = Anchor1DKind.AUTO
    dx: float = 0.0
    dy: float = 0.0


class FixedPosition(StrictModel):
    at: FixedPos
    dx: float = 0.0
    dy: float = 0.0


Position = Union[Anchor2D, Anchor1D, FixedPosition]


# Targets

class ByIdTarget(StrictModel):
    id: str = Field(min_length=1)


class FixedTarget(StrictModel):
    at: FixedPos


class ChartPartTarget(StrictModel):
    part: ChartPartKind


class DataPointTarget(StrictModel):
    """Rows selected by index list or by a predicate expression."""
    indices: Optional[Tuple[int, ...]] = None
    expr: Optional[str] = None

    @field_validator("indices")
    @classmethod
    def _clean_indices(cls, value: Optional[Tuple[int, ...]]) -> Optional[Tuple[int, ...]]:
        if value is None:
            return value
        if any(i < 0 for i in value):
            raise ValueError("indices must be non-negative")
        return tuple(sorted(set(value)))

    @model_validator(mode="after")
    def _one_selector(self) -> "DataPointTarget":
        if (self.indices is None) == (self.expr is None):
            raise ValueError("dataPoint needs exactly one of 'indices' or 'expr'")
        return self


class AxisTarget(StrictModel):
    axis: Literal["x", "y"]
    parts: Tuple[AxisPartKind, ...] = Field(min_length=1)
    range: Optional[Union[Tuple[Coord, Coord], str]] = None

    @field_validator("parts")
    @classmethod
    def _targetable(cls, value: Tuple[AxisPartKind, ...]) -> Tuple[AxisPartKind, ...]:
        if AxisPartKind.DOMAIN in value:
            raise ValueError("'domain' is not a targetable axis part")
        return tuple(dict.fromkeys(value))


class NoneTarget(StrictModel):
    none: Literal[True] = True


Target = Union[ByIdTarget, FixedTarget, ChartPartTarget, DataPointTarget, AxisTarget, NoneTarget]


# Effects

class ShapeKind(str, Enum):
    RECT = "rect"
    ELLIPSE = "ellipse"
    BRACKET = "bracket"
    PATH = "path"


class Markers(str, Enum):
    NONE = "none"
    ARROW_START = "arrow-start"
    ARROW_END = "arrow-end"
    ARROW_BOTH = "arrow-both"

    @property
    def at_start(self) -> bool:
        return self in (Markers.ARROW_START, Markers.ARROW_BOTH)

    @property
    def at_end(self) -> bool:
        return self in (Markers.ARROW_END, Markers.ARROW_BOTH)


class Interpolation(str, Enum):
    LINEAR = "linear"
    CATMULL_ROM = "catmull-rom"
    STEPWISE = "stepwise"


class IndicatorKind(str, Enum):
    LINE = "line"
    AREA = "area"
    ARROW = "arrow"
    TREND = "trend"


def _check_path(d: Optional[str]) -> Optional[str]:
    if d is not None:
        parse_path_data(d)
    return d


class TextAnn(StrictModel):
    content: str = Field(min_length=1)
    position: Optional[Position] = None


class EnclosureAnn(StrictModel):
    shape: ShapeKind = ShapeKind.RECT
    path: Optional[str] = None
    position: Optional[Position] = None
    padding: float = Field(default_factory=lambda: settings.enclosure_padding, ge=0)

    @field_validator("path")
    @classmethod
    def _valid_path(cls, value: Optional[str]) -> Optional[str]:
        return _check_path(value)

    @model_validator(mode="after")
    def _path_matches_shape(self) -> "EnclosureAnn":
        if (self.shape == ShapeKind.PATH) != (self.path is not None):
            raise ValueError("a path enclosure needs 'path' data and other shapes must not have it")
        return self


class ConnectorAnn(StrictModel):
    markers: Markers = Markers.NONE
    path: Optional[str] = None
    interpolation: Interpolation = Interpolation.LINEAR

    @field_validator("path")
    @classmethod
    def _valid_path(cls, value: Optional[str]) -> Optional[str]:
        return _check_path(value)


class IndicatorAnn(StrictModel):
    kind: IndicatorKind
    axis: Literal["x", "y"] = "y"
    expr: Union[str, Tuple[str, str]]
    markers: Markers = Markers.NONE

    @model_validator(mode="after")
    def _expr_shape(self) -> "IndicatorAnn":
        if isinstance(self.expr, tuple) and self.kind != IndicatorKind.AREA:
            raise ValueError("only area indicators take an [lo, hi] expression pair")
        return self


Body = TypeVar("Body", TextAnn, EnclosureAnn, ConnectorAnn, IndicatorAnn)


class Annotation(StrictModel, Generic[Body]):
    """An effect with its id and resolved style."""
    id: str = Field(min_length=1)
    style: Style = Style()
    body: Body


class AnnotationRoot(StrictModel):
    """Targets plus at most one effect of each type."""
    targets: Tuple[Target, ...] = Field(min_length=1)
    text: Optional[Annotation[TextAnn]] = None
    enclosure: Optional[Annotation[EnclosureAnn]] = None
    connector: Optional[Annotation[ConnectorAnn]] = None
    indicator: Optional[Annotation[IndicatorAnn]] = None

    @model_validator(mode="after")
    def _has_effect(self) -> "AnnotationRoot":
        if not self.effects():
            raise ValueError("an annotation needs at least one of text, enclosure, connector, indicator")
        return self

    def effect(self, kind: EffectKind) -> Optional[Annotation]:
        return getattr(self, kind.value)

    def effects(self) -> List[Tuple[EffectKind, Annotation]]:
        """Present effects in paint order."""
        return [(k, self.effect(k)) for k in EffectKind if self.effect(k) is not None]


# Ensembles

class ReferenceEnsemble(StrictModel):
    from_id: str = Field(min_length=1)
    to_id: str = Field(min_length=1)
    connector: Optional[Annotation[ConnectorAnn]] = None


class CompositeEnsemble(StrictModel):
    id: str = Field(min_length=1)
    members: Tuple[str, ...] = Field(min_length=1)


Ensemble = Union[ReferenceEnsemble, CompositeEnsemble]


# Envelope

class DataSource(StrictModel):
    url: Optional[str] = None
    values: Optional[Tuple[Dict[str, Any], ...]] = None
    parse: Dict[str, ColumnType] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _one_source(self) -> "DataSource":
        if (self.url is None) == (self.values is None):
            raise ValueError("data needs exactly one of 'url' or 'values'")
        return self


class Spec(BaseModel):
    """A parsed, validated chart + annotation document."""
    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    chart: ChartSpec
    data: DataSource
    annotations: Tuple[AnnotationRoot, ...] = ()
    ensembles: Tuple[Ensemble, ...] = ()
    style_config: Dict[EffectKind, Dict[str, Any]] = Field(default_factory=dict)
    table: DataTable = Field(exclude=True)

    def effect_ids(self) -> Dict[str, Tuple[int, EffectKind]]:
        """Effect id -> (root index, kind)."""
        ids = {}
        for i, root in enumerate(self.annotations):
            for kind, ann in root.effects():
                ids[ann.id] = (i, kind)
        return ids

    def composites(self) -> Dict[str, CompositeEnsemble]:
        return {e.id: e for e in self.ensembles if isinstance(e, CompositeEnsemble)}
