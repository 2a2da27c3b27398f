"""Host chart specification: mark, encodings, size and chart parts."""

import logging
from enum import Enum
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from ..data import ColumnType, DataTable
from ..errors import EncodingError
from ..geometry import Rect

logger = logging.getLogger(__name__)

# Fixed layout margins around the plot area, in pixels.
MARGIN_TOP = 40
MARGIN_RIGHT = 20
MARGIN_BOTTOM = 40
MARGIN_LEFT = 50
LEGEND_WIDTH = 80
CAPTION_HEIGHT = 20


class Mark(str, Enum):
    """Supported mark types."""
    BAR = "bar"
    LINE = "line"
    POINT = "point"
    AREA = "area"


class Channel(str, Enum):
    """Encoding channels."""
    X = "x"
    Y = "y"
    COLOR = "color"


class EncodingType(str, Enum):
    """Measurement type of an encoded field."""
    QUANTITATIVE = "quantitative"
    NOMINAL = "nominal"
    ORDINAL = "ordinal"
    TEMPORAL = "temporal"

    @property
    def discrete(self) -> bool:
        return self in (EncodingType.NOMINAL, EncodingType.ORDINAL)


class ScaleOverride(BaseModel):
    """Explicit scale domain supplied by the author."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    domain: List[Union[float, str]] = Field(min_length=1)


class Encoding(BaseModel):
    """Binding of a data field to a visual channel."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    field: str = Field(min_length=1)
    type: EncodingType
    scale: Optional[ScaleOverride] = None


class ChartSpec(BaseModel):
    """Chart portion of the spec envelope."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    mark: Mark
    encoding: Dict[Channel, Encoding]
    title: Optional[str] = None
    subtitle: Optional[str] = None
    caption: Optional[str] = None
    width: int = Field(400, gt=0)
    height: int = Field(300, gt=0)
    nice: bool = True

    @field_validator("encoding")
    @classmethod
    def _require_xy(cls, value: Dict[Channel, Encoding]) -> Dict[Channel, Encoding]:
        missing = [c.value for c in (Channel.X, Channel.Y) if c not in value]
        if missing:
            raise ValueError(f"missing required channel(s): {', '.join(missing)}")
        return value

    @field_validator("width")
    @classmethod
    def _width_fits(cls, value: int, info: ValidationInfo) -> int:
        legend = Channel.COLOR in info.data.get("encoding", {})
        if value - MARGIN_LEFT - MARGIN_RIGHT - (LEGEND_WIDTH if legend else 0) <= 0:
            raise ValueError("width leaves no room for the plot area")
        return value

    @field_validator("height")
    @classmethod
    def _height_fits(cls, value: int, info: ValidationInfo) -> int:
        caption = CAPTION_HEIGHT if info.data.get("caption") else 0
        if value - MARGIN_TOP - MARGIN_BOTTOM - caption <= 0:
            raise ValueError("height leaves no room for the plot area")
        return value

    @property
    def has_legend(self) -> bool:
        return Channel.COLOR in self.encoding

    def channel(self, channel: Channel) -> Optional[Encoding]:
        return self.encoding.get(channel)

    def encoded_fields(self) -> List[str]:
        """Distinct encoded field names in channel order x, y, color."""
        fields: List[str] = []
        for channel in (Channel.X, Channel.Y, Channel.COLOR):
            enc = self.encoding.get(channel)
            if enc is not None and enc.field not in fields:
                fields.append(enc.field)
        return fields

    def plot_area(self) -> Rect:
        """Total size minus the fixed margins."""
        right = MARGIN_RIGHT + (LEGEND_WIDTH if self.has_legend else 0)
        bottom = MARGIN_BOTTOM + (CAPTION_HEIGHT if self.caption else 0)
        w = self.width - MARGIN_LEFT - right
        h = self.height - MARGIN_TOP - bottom
        return Rect(MARGIN_LEFT, MARGIN_TOP, max(0, w), max(0, h))


def validate_encodings(spec: ChartSpec, data: DataTable) -> None:
    """
    Check that every encoding binds to a compatible column.

    Args:
        spec: Chart specification
        data: Bound table

    Raises:
        EncodingError: Unknown field or incompatible column type
    """
    for channel, enc in spec.encoding.items():
        path = f"/chart/encoding/{channel.value}/field"
        if not data.has_column(enc.field):
            raise EncodingError(f"Field '{enc.field}' is not a data column", path=path)
        column_type = data.column_type(enc.field)
        if enc.type == EncodingType.QUANTITATIVE and column_type != ColumnType.NUMBER:
            raise EncodingError(
                f"Quantitative encoding needs a number column, '{enc.field}' is {column_type.value}",
                path=path,
            )
        if enc.type == EncodingType.TEMPORAL and column_type != ColumnType.TEMPORAL:
            raise EncodingError(
                f"Temporal encoding needs a temporal column, '{enc.field}' is {column_type.value}",
                path=path,
            )
        if channel == Channel.COLOR and not enc.type.discrete:
            raise EncodingError(
                "Color encodings must be nominal or ordinal",
                path="/chart/encoding/color/type",
            )
