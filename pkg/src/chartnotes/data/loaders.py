"""CSV and JSON ingestion with column type inference."""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Union

from ..errors import (
    DataIOError,
    MalformedCsv,
    MalformedJson,
    MalformedNumber,
    NestedObject,
    TypeConflict,
)
from .table import (
    Column,
    ColumnType,
    DataTable,
    Value,
    coerce_type,
    format_number,
    format_temporal,
    is_number_text,
    parse_temporal,
)

logger = logging.getLogger(__name__)

TypeHints = Mapping[str, Union[str, ColumnType]]


class Cell(NamedTuple):
    """Raw CSV cell text and whether it was written in quotes."""

    text: str
    quoted: bool = False


def _read_records(text: str) -> List[List[Cell]]:
    """
    Split RFC 4180 text into records, keeping track of quoted cells.

    Lines may end in LF, CRLF or CR. A blank line is a record holding one
    bare empty cell.

    Raises:
        MalformedCsv: For an unterminated quote or text after a closing quote
    """
    records: List[List[Cell]] = []
    record: List[Cell] = []
    i, n = 0, len(text)
    while i < n:
        if text[i] == '"':
            start = i
            parts = []
            j = i + 1
            while True:
                k = text.find('"', j)
                if k < 0:
                    raise MalformedCsv(f"Unterminated quoted field at offset {start}")
                parts.append(text[j:k])
                if text.startswith('"', k + 1):
                    parts.append('"')
                    j = k + 2
                    continue
                i = k + 1
                break
            if i < n and text[i] not in ",\r\n":
                raise MalformedCsv(f"Unexpected {text[i]!r} after quoted field at offset {i}")
            record.append(Cell("".join(parts), True))
        else:
            j = i
            while j < n and text[j] not in ",\r\n":
                j += 1
            record.append(Cell(text[i:j]))
            i = j

        if i < n and text[i] == ",":
            i += 1
            if i == n:
                record.append(Cell(""))
            continue
        if i < n and text[i] == "\r":
            i += 1
        if i < n and text[i] == "\n":
            i += 1
        records.append(record)
        record = []
    if record:
        records.append(record)
    return records


def _infer_text_type(cells: Sequence[Cell]) -> ColumnType:
    """
    Infer a column type from raw cells.

    Promotion order: NUMBER -> TEMPORAL -> STRING. Unquoted empty cells are
    ignored; any quoted cell makes the column a string column.
    """
    present = [c for c in cells if c.quoted or c.text != ""]
    if not present or any(c.quoted for c in present):
        return ColumnType.STRING
    if all(is_number_text(c.text) for c in present):
        return ColumnType.NUMBER
    if all(parse_temporal(c.text) is not None for c in present):
        return ColumnType.TEMPORAL
    return ColumnType.STRING


def _finite(value: Union[int, float, str], column: str, row: int) -> float:
    try:
        number = float(value)
    except OverflowError:
        number = math.inf
    if not math.isfinite(number):
        raise MalformedNumber(
            f"Row {row}: {value!r} in column '{column}' is not a finite number",
            path=f"/{row}/{column}",
        )
    return number


def _convert_text(cell: Cell, type_: ColumnType, column: str, row: int) -> Value:
    text = cell.text
    if text == "" and not (cell.quoted and type_ == ColumnType.STRING):
        return None
    if type_ == ColumnType.NUMBER:
        if not is_number_text(text):
            raise TypeConflict(f"Row {row}: '{text}' in column '{column}' is not a number")
        return _finite(text, column, row)
    if type_ == ColumnType.TEMPORAL:
        ms = parse_temporal(text)
        if ms is None:
            raise TypeConflict(f"Row {row}: '{text}' in column '{column}' is not ISO-8601")
        return ms
    return text


def _check_hints(hints: TypeHints, names: Sequence[str]) -> Dict[str, ColumnType]:
    resolved = {}
    for name, hint in hints.items():
        if name not in names:
            raise TypeConflict(f"Type hint for unknown column '{name}'")
        try:
            resolved[name] = coerce_type(hint)
        except ValueError as e:
            raise TypeConflict(f"Unknown column type '{hint}' for '{name}'") from e
    return resolved


def parse_csv_text(text: str, type_hints: Optional[TypeHints] = None) -> DataTable:
    """
    Parse RFC 4180 CSV text with a header row.

    Quoted cells are text: ``""`` is an empty string where a bare empty
    cell is null, and ``"1"`` keeps a column from being inferred as numbers.

    Args:
        text: CSV document
        type_hints: Optional column name -> type overrides

    Returns:
        Typed table
    """
    records = _read_records(text)
    while records and records[0] == [Cell("")]:
        records.pop(0)
    if not records:
        raise MalformedCsv("CSV input has no header row")

    header = [h.text.strip() for h in records[0]]
    if any(not h for h in header):
        raise MalformedCsv("CSV header contains an empty column name")
    if len(set(header)) != len(header):
        raise MalformedCsv(f"CSV header has duplicate names: {header}")

    body = records[1:]
    if len(header) > 1:
        # one-column tables keep blank lines as null rows
        body = [r for r in body if r != [Cell("")]]
    for i, record in enumerate(body):
        if len(record) != len(header):
            raise MalformedCsv(
                f"Row {i} has {len(record)} cells, header has {len(header)}"
            )

    hints = _check_hints(type_hints or {}, header)
    columns = []
    for j, name in enumerate(header):
        cells = [record[j] for record in body]
        columns.append(Column(name, hints.get(name) or _infer_text_type(cells)))

    rows = tuple(
        tuple(_convert_text(record[j], col.type, col.name, i) for j, col in enumerate(columns))
        for i, record in enumerate(body)
    )
    return DataTable(columns=tuple(columns), rows=rows)


def load_csv(path: Union[str, Path], type_hints: Optional[TypeHints] = None) -> DataTable:
    """
    Load a UTF-8 CSV file with a header row.

    Args:
        path: CSV file path
        type_hints: Optional column name -> type overrides

    Returns:
        Typed table in file row order
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise DataIOError(f"Cannot read data file {path}: {e}") from e
    table = parse_csv_text(text, type_hints)
    logger.debug(f"Loaded {table.row_count} rows from {path}")
    return table


def _reject_constant(name: str) -> Any:
    raise MalformedJson(f"Non-finite JSON number {name} is not allowed")


def _json_value_kind(value: Any, key: str, row: int) -> Optional[str]:
    if value is None:
        return None
    if isinstance(value, (dict, list)):
        raise NestedObject(f"Row {row}: key '{key}' holds a nested value", path=f"/{row}/{key}")
    if isinstance(value, bool):
        return "string"
    if isinstance(value, (int, float)):
        return "number"
    return "string"


def table_from_rows(
    records: Sequence[Any], type_hints: Optional[TypeHints] = None
) -> DataTable:
    """
    Build a table from a list of flat JSON objects.

    The union of keys (first-seen order) becomes the columns; missing keys are null.

    Args:
        records: Parsed JSON array
        type_hints: Optional column name -> type overrides

    Returns:
        Typed table
    """
    if not isinstance(records, list):
        raise MalformedJson("Expected a JSON array of objects")
    names: List[str] = []
    for i, record in enumerate(records):
        if not isinstance(record, dict):
            raise MalformedJson(f"Row {i} is not an object", path=f"/{i}")
        for key in record:
            if key not in names:
                names.append(key)

    hints = _check_hints(type_hints or {}, names)
    columns = []
    for name in names:
        kinds = {_json_value_kind(r.get(name), name, i) for i, r in enumerate(records)}
        kinds.discard(None)
        if len(kinds) > 1:
            raise TypeConflict(f"Column '{name}' mixes numbers and strings")
        if name in hints:
            type_ = hints[name]
        elif kinds == {"number"}:
            type_ = ColumnType.NUMBER
        elif kinds == {"string"}:
            texts = [str(r[name]) for r in records if r.get(name) is not None]
            if all(not isinstance(r.get(name), bool) for r in records) and all(
                parse_temporal(t) is not None for t in texts
            ):
                type_ = ColumnType.TEMPORAL
            else:
                type_ = ColumnType.STRING
        else:
            type_ = ColumnType.STRING
        columns.append(Column(name, type_))

    rows = []
    for i, record in enumerate(records):
        row = []
        for col in columns:
            row.append(_convert_json(record.get(col.name), col, i))
        rows.append(tuple(row))
    return DataTable(columns=tuple(columns), rows=tuple(rows))


def _convert_json(value: Any, col: Column, row: int) -> Value:
    if value is None:
        return None
    if isinstance(value, bool):
        value = "true" if value else "false"
    if col.type == ColumnType.NUMBER:
        if not isinstance(value, (int, float)):
            raise TypeConflict(f"Row {row}: column '{col.name}' expects a number, got {value!r}")
        return _finite(value, col.name, row)
    if col.type == ColumnType.TEMPORAL:
        ms = parse_temporal(str(value))
        if ms is None:
            raise TypeConflict(f"Row {row}: column '{col.name}' expects ISO-8601, got {value!r}")
        return ms
    if isinstance(value, float):
        return format_number(_finite(value, col.name, row))
    return str(value)


def load_json_rows(path: Union[str, Path], type_hints: Optional[TypeHints] = None) -> DataTable:
    """
    Load a JSON array of flat objects.

    Args:
        path: JSON file path
        type_hints: Optional column name -> type overrides

    Returns:
        Typed table in array order
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise DataIOError(f"Cannot read data file {path}: {e}") from e
    try:
        records = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise MalformedJson(f"Invalid JSON in {path}: {e}") from e
    return table_from_rows(records, type_hints)


def load_table(path: Union[str, Path], type_hints: Optional[TypeHints] = None) -> DataTable:
    """Dispatch on file extension: ``.json`` rows or CSV."""
    if Path(path).suffix.lower() == ".json":
        return load_json_rows(path, type_hints)
    return load_csv(path, type_hints)


def _csv_field(text: str, quote: bool = False) -> str:
    if quote or any(c in text for c in ',"\r\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def to_csv_text(table: DataTable) -> str:
    """
    Serialize a table to CSV that ``parse_csv_text`` reads back unchanged.

    Temporal values use canonical ISO-8601, string values are always quoted
    and nulls are bare empty cells.
    """
    lines = [",".join(_csv_field(c.name) for c in table.columns)]
    for row in table.rows:
        cells = []
        for col, value in zip(table.columns, row):
            if value is None:
                cells.append("")
            elif col.type == ColumnType.NUMBER:
                cells.append(format_number(float(value)))
            elif col.type == ColumnType.TEMPORAL:
                cells.append(format_temporal(int(value)))
            else:
                cells.append(_csv_field(str(value), quote=True))
        lines.append(",".join(cells))
    return "".join(f"{line}\n" for line in lines)
