"""Chart grammar module initialization."""

from .scales import (
    PALETTE,
    Scale,
    ScaleKind,
    color_domain,
    color_for,
    infer_scales,
    nice_domain,
    scale_apply,
    surviving_rows,
    tick_step,
    value_channel,
)
from .spec import (
    Channel,
    ChartSpec,
    Encoding,
    EncodingType,
    Mark,
    ScaleOverride,
    validate_encodings,
)

__all__ = [
    "PALETTE",
    "Scale",
    "ScaleKind",
    "color_domain",
    "color_for",
    "infer_scales",
    "nice_domain",
    "scale_apply",
    "surviving_rows",
    "tick_step",
    "value_channel",
    "Channel",
    "ChartSpec",
    "Encoding",
    "EncodingType",
    "Mark",
    "ScaleOverride",
    "validate_encodings",
]
