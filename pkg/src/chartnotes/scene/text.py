"""Deterministic text measurement from an embedded metrics table."""

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, Tuple

import yaml

METRICS_FILE = Path(__file__).with_name("metrics.yaml")
LINE_HEIGHT = 1.2


@dataclass(frozen=True)
class TextMetrics:
    """Per-character advances in 1/1000 em."""
    advances: Dict[str, int]
    default: int

    def units(self, s: str) -> int:
        return sum(self.advances.get(c, self.default) for c in s)

    def width(self, s: str, size: float) -> float:
        return self.units(s) * size / 1000

    def line_height(self, size: float) -> float:
        return LINE_HEIGHT * size


@lru_cache(maxsize=1)
def load_metrics() -> TextMetrics:
    with open(METRICS_FILE, "r", encoding="utf-8") as f:
        table = yaml.safe_load(f)
    first = int(table["first"])
    advances = {chr(first + i): int(w) for i, w in enumerate(table["advances"])}
    return TextMetrics(advances=advances, default=int(table["default"]))


def measure_text(s: str, size: float) -> Tuple[float, float]:
    """
    Measure a string.

    Args:
        s: Text; ``\\n`` separates lines
        size: Font size in pixels

    Returns:
        (width, height) in pixels; width is the widest line
    """
    metrics = load_metrics()
    lines = s.split("\n")
    width = max(metrics.width(line, size) for line in lines)
    return width, metrics.line_height(size) * len(lines)
