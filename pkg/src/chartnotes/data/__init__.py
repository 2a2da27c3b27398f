"""Data module initialization."""

from .loaders import (
    load_csv,
    load_json_rows,
    load_table,
    parse_csv_text,
    table_from_rows,
    to_csv_text,
)
from .table import (
    Column,
    ColumnType,
    DataTable,
    Row,
    Value,
    display_value,
    distinct,
    format_number,
    format_temporal,
    parse_temporal,
    sort_key,
)

__all__ = [
    "load_csv",
    "load_json_rows",
    "load_table",
    "parse_csv_text",
    "table_from_rows",
    "to_csv_text",
    "Column",
    "ColumnType",
    "DataTable",
    "Row",
    "Value",
    "display_value",
    "distinct",
    "format_number",
    "format_temporal",
    "parse_temporal",
    "sort_key",
]
