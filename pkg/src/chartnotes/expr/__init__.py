"""Expression module initialization."""

from .ast import (
    Aggregate,
    Binary,
    Field,
    Literal,
    Node,
    ParsedExpr,
    Unary,
    VType,
    pretty,
    references_datum,
)
from .evaluator import Evaluator, eval_constant, eval_row, select_rows
from .parser import TypeChecker, parse_expr, parse_untyped

__all__ = [
    "Aggregate",
    "Binary",
    "Field",
    "Literal",
    "Node",
    "ParsedExpr",
    "Unary",
    "VType",
    "pretty",
    "references_datum",
    "Evaluator",
    "eval_constant",
    "eval_row",
    "select_rows",
    "TypeChecker",
    "parse_expr",
    "parse_untyped",
]
