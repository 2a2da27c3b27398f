"""Axis tick generation."""

import math
from typing import List, Tuple

from ..chart import Scale, ScaleKind, tick_step
from ..data import ColumnType, Value, format_number, format_temporal

DAY_MS = 86_400_000


def tick_positions(scale: Scale, target_count: int) -> List[Tuple[Value, float]]:
    """
    Tick values and their pixel positions.

    Args:
        scale: Axis scale
        target_count: Desired number of ticks (at least 2)

    Returns:
        (value, pixel) pairs in ascending value order
    """
    if target_count < 2:
        raise ValueError("target_count must be at least 2")
    if not scale.continuous:
        return [(v, scale.apply(v)) for v in scale.domain]

    d0, d1 = float(scale.domain[0]), float(scale.domain[1])
    unit = 1.0
    if scale.kind == ScaleKind.TIME and d1 - d0 >= 2 * DAY_MS:
        unit = float(DAY_MS)
    step = tick_step(d0 / unit, d1 / unit, target_count) * unit

    ticks: List[Tuple[Value, float]] = []
    first = math.ceil(d0 / step - 1e-9)
    last = math.floor(d1 / step + 1e-9)
    for k in range(first, last + 1):
        value: Value = round(k * step, 12)
        if scale.kind == ScaleKind.TIME:
            value = int(round(value))
        ticks.append((value, scale.apply(value)))
    return ticks


def format_tick(value: Value, scale: Scale) -> str:
    """Label text for a tick value."""
    if scale.value_type == ColumnType.TEMPORAL and isinstance(value, int):
        text = format_temporal(value)
        return text[:10] if value % DAY_MS == 0 else text
    if isinstance(value, float):
        return format_number(round(value, 10))
    return str(value)
