"""Scales mapping data values to pixels."""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import settings
from ..data import ColumnType, DataTable, Value, distinct, parse_temporal, sort_key
from ..errors import DomainMiss, EmptyDomain, EncodingError
from .spec import Channel, ChartSpec, Encoding, EncodingType, Mark

logger = logging.getLogger(__name__)

DAY_MS = 86_400_000

# Categorical palette for color encodings.
PALETTE = (
    "#4c78a8",
    "#f58518",
    "#e45756",
    "#72b7b2",
    "#54a24b",
    "#eeca3b",
    "#b279a2",
    "#ff9da6",
    "#9d755d",
    "#bab0ac",
)


class ScaleKind(str, Enum):
    """Scale families."""
    LINEAR = "linear"
    BAND = "band"
    POINT = "point-ordinal"
    TIME = "time"


@dataclass(frozen=True)
class Scale:
    """
    Data-to-pixel mapping for one channel.

    Continuous scales carry a two-element ``domain``; discrete scales carry the
    ordered category list.
    """
    kind: ScaleKind
    domain: Tuple[Value, ...]
    range: Tuple[float, float]
    band_padding: float = 0.0
    value_type: ColumnType = ColumnType.NUMBER

    @property
    def continuous(self) -> bool:
        return self.kind in (ScaleKind.LINEAR, ScaleKind.TIME)

    @property
    def step(self) -> float:
        r0, r1 = self.range
        return (r1 - r0) / max(1, len(self.domain))

    @property
    def bandwidth(self) -> float:
        if self.kind != ScaleKind.BAND:
            return 0.0
        return self.step * (1 - self.band_padding)

    def index(self, v: Value) -> int:
        """Position of ``v`` in a discrete domain."""
        for i, item in enumerate(self.domain):
            if item == v:
                return i
        raise DomainMiss(f"Value {v!r} is not in the scale domain")

    def band_start(self, v: Value) -> float:
        i = self.index(v)
        return self.range[0] + (i + self.band_padding) * self.step

    def contains(self, v: Value) -> bool:
        if v is None:
            return False
        if not self.continuous:
            return any(item == v for item in self.domain)
        if isinstance(v, str) or isinstance(v, bool):
            return False
        return self.domain[0] <= v <= self.domain[1]

    def apply(self, v: Value) -> float:
        if v is None:
            raise DomainMiss("Cannot map a null value")
        if self.kind == ScaleKind.BAND:
            return self.band_start(v) + self.bandwidth / 2
        if self.kind == ScaleKind.POINT:
            return self.range[0] + (self.index(v) + 0.5) * self.step
        if isinstance(v, str) or isinstance(v, bool):
            raise DomainMiss(f"Value {v!r} does not belong to a {self.kind.value} scale")
        d0, d1 = float(self.domain[0]), float(self.domain[1])
        r0, r1 = self.range
        return r0 + (float(v) - d0) / (d1 - d0) * (r1 - r0)

    def invert(self, px: float) -> float:
        """Pixel back to data value; continuous scales only."""
        if not self.continuous:
            raise ValueError("invert is defined for linear and time scales only")
        d0, d1 = float(self.domain[0]), float(self.domain[1])
        r0, r1 = self.range
        return d0 + (px - r0) / (r1 - r0) * (d1 - d0)


def scale_apply(scale: Scale, v: Value) -> float:
    """
    Map a data value to a pixel coordinate.

    Args:
        scale: Scale to apply
        v: Data value of the scale's type

    Returns:
        Pixel coordinate; band scales return the band center
    """
    return scale.apply(v)


def tick_step(d0: float, d1: float, target: int) -> float:
    """
    Pick a step from {1, 2, 5} x 10^k whose tick count is nearest ``target``.

    Ties prefer the larger step.
    """
    span = d1 - d0
    if span <= 0:
        return 1.0
    base = math.floor(math.log10(span))
    best: Optional[Tuple[int, float]] = None
    for exponent in range(base - 2, base + 2):
        for mantissa in (1, 2, 5):
            step = mantissa * 10.0 ** exponent
            count = math.floor(d1 / step + 1e-9) - math.ceil(d0 / step - 1e-9) + 1
            diff = abs(count - target)
            if best is None or diff < best[0] or (diff == best[0] and step > best[1]):
                best = (diff, step)
    return best[1]


def nice_domain(scale: Scale, target: int = None) -> Scale:
    """Extend a linear domain outward to multiples of its tick step."""
    if scale.kind != ScaleKind.LINEAR:
        return scale
    count = target or settings.tick_count
    d0, d1 = float(scale.domain[0]), float(scale.domain[1])
    step = tick_step(d0, d1, count)
    lo = round(math.floor(d0 / step + 1e-9) * step, 12)
    hi = round(math.ceil(d1 / step - 1e-9) * step, 12)
    return replace(scale, domain=(lo, hi))


def surviving_rows(spec: ChartSpec, data: DataTable) -> List[int]:
    """Indices of rows with no null in any encoded field."""
    fields = [data.column_index(f) for f in spec.encoded_fields()]
    return [i for i, row in enumerate(data.rows) if all(row[j] is not None for j in fields)]


def value_channel(spec: ChartSpec) -> Channel:
    """Channel along which bars and areas extend."""
    x = spec.encoding[Channel.X]
    y = spec.encoding[Channel.Y]
    if y.type.discrete and not x.type.discrete:
        return Channel.X
    return Channel.Y


def color_domain(spec: ChartSpec, data: DataTable) -> List[Value]:
    enc = spec.channel(Channel.COLOR)
    if enc is None:
        return []
    if enc.scale is not None:
        return list(enc.scale.domain)
    rows = surviving_rows(spec, data)
    idx = data.column_index(enc.field)
    return sorted(distinct([data.rows[i][idx] for i in rows]), key=sort_key)


def color_for(domain: Sequence[Value], v: Value) -> str:
    for i, item in enumerate(domain):
        if item == v:
            return PALETTE[i % len(PALETTE)]
    return PALETTE[0]


def _override_domain(enc: Encoding, channel: Channel) -> Tuple[Value, ...]:
    path = f"/chart/encoding/{channel.value}/scale/domain"
    values = list(enc.scale.domain)
    if enc.type.discrete:
        return tuple(values)
    if len(values) != 2:
        raise EncodingError("A continuous scale domain needs exactly two values", path=path)
    if enc.type == EncodingType.TEMPORAL:
        out = []
        for v in values:
            ms = parse_temporal(v) if isinstance(v, str) else int(v)
            if ms is None:
                raise EncodingError(f"'{v}' is not an ISO-8601 date", path=path)
            out.append(ms)
        values = out
    elif any(isinstance(v, str) for v in values):
        raise EncodingError("A quantitative scale domain needs numbers", path=path)
    lo, hi = values
    if lo > hi:
        raise EncodingError("Scale domain must be ascending", path=path)
    return (lo, hi)


def _pad_constant(lo: Value, hi: Value, temporal: bool) -> Tuple[Value, Value]:
    if lo != hi:
        return lo, hi
    unit = DAY_MS if temporal else 1.0
    return lo - unit, hi + unit


def _channel_range(spec: ChartSpec, channel: Channel, discrete: bool) -> Tuple[float, float]:
    plot = spec.plot_area()
    if channel == Channel.X:
        return (plot.x, plot.right)
    if discrete:
        return (plot.y, plot.bottom)
    return (plot.bottom, plot.y)


def infer_scales(
    spec: ChartSpec,
    data: DataTable,
    nice: bool = False,
    band_padding: Optional[float] = None,
    tick_count: Optional[int] = None,
) -> Dict[Channel, Scale]:
    """
    Infer positional scales for the x and y channels.

    Args:
        spec: Validated chart specification
        data: Bound table
        nice: Extend linear domains to tick-step multiples
        band_padding: Band padding fraction, settings default when None
        tick_count: Target tick count used for nice-ing

    Returns:
        Mapping channel -> Scale
    """
    padding = settings.band_padding if band_padding is None else band_padding
    rows = surviving_rows(spec, data)
    scales: Dict[Channel, Scale] = {}

    for channel in (Channel.X, Channel.Y):
        enc = spec.encoding[channel]
        column_type = data.column_type(enc.field)
        idx = data.column_index(enc.field)
        values = [data.rows[i][idx] for i in rows]
        if enc.scale is None and not values:
            raise EmptyDomain(
                f"No rows to derive the {channel.value} domain from",
                path=f"/chart/encoding/{channel.value}",
            )
        rng = _channel_range(spec, channel, enc.type.discrete)

        if enc.type.discrete:
            if enc.scale is not None:
                domain = _override_domain(enc, channel)
            else:
                domain = tuple(sorted(distinct(values), key=sort_key))
            kind = ScaleKind.BAND if spec.mark == Mark.BAR else ScaleKind.POINT
            scale = Scale(
                kind=kind,
                domain=domain,
                range=rng,
                band_padding=padding if kind == ScaleKind.BAND else 0.0,
                value_type=column_type,
            )
        else:
            temporal = enc.type == EncodingType.TEMPORAL
            if enc.scale is not None:
                lo, hi = _override_domain(enc, channel)
            else:
                lo, hi = min(values), max(values)
                if (
                    not temporal
                    and spec.mark in (Mark.BAR, Mark.AREA)
                    and channel == value_channel(spec)
                ):
                    lo, hi = min(lo, 0.0), max(hi, 0.0)
            lo, hi = _pad_constant(lo, hi, temporal)
            scale = Scale(
                kind=ScaleKind.TIME if temporal else ScaleKind.LINEAR,
                domain=(lo, hi),
                range=rng,
                value_type=column_type,
            )
            if nice and enc.scale is None:
                scale = nice_domain(scale, tick_count)
        logger.debug(f"{channel.value} scale: {scale.kind.value} {scale.domain}")
        scales[channel] = scale
    return scales
