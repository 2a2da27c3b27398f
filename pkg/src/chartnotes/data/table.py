"""Typed in-memory table used by the chart core and the expression evaluator."""

import math
import re
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..errors import InvalidTable, NullOperand

# number -> float, string -> str, temporal -> int (ms since epoch, UTC), null -> None
Value = Union[float, str, int, None]
Row = Tuple[Value, ...]

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)

NUMBER_PATTERN = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
ISO_PATTERN = re.compile(
    r"^\d{4}-\d{2}-\d{2}"
    r"([T ]\d{2}:\d{2}(:\d{2}(\.\d{1,6})?)?(Z|[+-]\d{2}:\d{2})?)?$"
)


class ColumnType(str, Enum):
    """Supported column types."""
    NUMBER = "number"
    STRING = "string"
    TEMPORAL = "temporal"


@dataclass(frozen=True)
class Column:
    """Column definition."""
    name: str
    type: ColumnType


def is_number_text(text: str) -> bool:
    return bool(NUMBER_PATTERN.match(text.strip()))


def parse_temporal(text: str) -> Optional[int]:
    """
    Parse an ISO-8601 date or date-time to epoch milliseconds.

    Args:
        text: Candidate string; naive times are taken as UTC

    Returns:
        Milliseconds since epoch, or None if the string is not ISO-8601
    """
    value = text.strip()
    if not ISO_PATTERN.match(value):
        return None
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(value)
    except ValueError:
        return None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return (dt - EPOCH) // timedelta(milliseconds=1)


def format_temporal(ms: int) -> str:
    """Canonical ISO-8601 form of an epoch-millisecond value."""
    dt = EPOCH + timedelta(milliseconds=ms)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}Z"


def format_number(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


@dataclass(frozen=True)
class DataTable:
    """Immutable table of typed columns; row order is file order."""
    columns: Tuple[Column, ...]
    rows: Tuple[Row, ...]
    _aggregates: Dict[Tuple[str, str], Value] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if any(not n for n in names):
            raise InvalidTable("Column names must be non-empty")
        if len(set(names)) != len(names):
            raise InvalidTable(f"Duplicate column names in {names}")
        arity = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != arity:
                raise InvalidTable(f"Row {i} has {len(row)} values, expected {arity}")
            for col, value in zip(self.columns, row):
                if value is None:
                    continue
                if col.type == ColumnType.NUMBER:
                    if isinstance(value, bool) or not isinstance(value, (int, float)):
                        raise InvalidTable(f"Row {i}: column '{col.name}' expects a number")
                    if not math.isfinite(value):
                        raise InvalidTable(f"Row {i}: column '{col.name}' is not finite")

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def schema(self) -> Dict[str, ColumnType]:
        return {c.name: c.type for c in self.columns}

    def has_column(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    def column_index(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise KeyError(name)

    def column_type(self, name: str) -> ColumnType:
        return self.columns[self.column_index(name)].type

    def values(self, name: str) -> List[Value]:
        idx = self.column_index(name)
        return [row[idx] for row in self.rows]

    def value(self, row: int, name: str) -> Value:
        return self.rows[row][self.column_index(name)]

    def aggregate(self, func: str, name: str) -> Value:
        """
        Null-skipping aggregate over a whole column.

        Args:
            func: One of min, max, mean, sum, count
            name: Column name

        Returns:
            Aggregate value (count of non-null values for ``count``)
        """
        key = (func, name)
        if key in self._aggregates:
            return self._aggregates[key]
        present = [v for v in self.values(name) if v is not None]
        if func == "count":
            result: Value = float(len(present))
        elif not present:
            raise NullOperand(f"{func}({name}) over a column with no values")
        elif func == "min":
            result = min(present)
        elif func == "max":
            result = max(present)
        elif func == "sum":
            result = float(math.fsum(present))
        elif func == "mean":
            result = float(math.fsum(present) / len(present))
        else:
            raise ValueError(f"Unknown aggregate: {func}")
        self._aggregates[key] = result
        return result


def coerce_type(value: Union[str, ColumnType]) -> ColumnType:
    return value if isinstance(value, ColumnType) else ColumnType(value)


def display_value(value: Value, type_: ColumnType) -> str:
    """Human-readable form used in labels and messages."""
    if value is None:
        return ""
    if type_ == ColumnType.TEMPORAL:
        return format_temporal(int(value))
    if type_ == ColumnType.NUMBER:
        return format_number(float(value))
    return str(value)


def sort_key(value: Value) -> Tuple[int, Union[float, str]]:
    """Ordering for discrete domains: numbers before strings, each ascending."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return (0, float(value))
    return (1, str(value))


def distinct(values: Sequence[Value]) -> List[Value]:
    seen = set()
    out = []
    for v in values:
        if v is None or v in seen:
            continue
        seen.add(v)
        out.append(v)
    return out
