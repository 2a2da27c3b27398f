"""Row-wise evaluation of typed expressions."""

import logging
import operator
from typing import Callable, Dict, Iterable, List, Optional, Union

from ..data import DataTable, Row, Value
from ..errors import DivisionByZero, ExprTypeError, NullOperand
from ..utils import diagnostic
from .ast import Aggregate, Binary, Field, Literal, Node, ParsedExpr, Unary, VType

logger = logging.getLogger(__name__)

Result = Union[Value, bool]

_COMPARE: Dict[str, Callable[[Result, Result], bool]] = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
}


def _root(e: Union[ParsedExpr, Node]) -> Node:
    return e.root if isinstance(e, ParsedExpr) else e


class Evaluator:
    """Evaluates typed expressions against the rows of one table."""

    def __init__(self, table: DataTable, bindings: Optional[Dict[str, Value]] = None):
        """
        Initialize the evaluator.

        Args:
            table: Table providing columns and aggregates
            bindings: Extra field values that shadow table columns (e.g. ``value``)
        """
        self.table = table
        self.bindings = bindings or {}
        self._columns = {c.name: i for i, c in enumerate(table.columns)}

    def evaluate(self, node: Node, row: Optional[Row]) -> Result:
        if isinstance(node, Literal):
            return node.value
        if isinstance(node, Field):
            if node.name in self.bindings:
                value = self.bindings[node.name]
            elif row is None:
                raise NullOperand(f"datum.{node.name} has no row to read from")
            else:
                value = row[self._columns[node.name]]
            if value is None:
                raise NullOperand(f"datum.{node.name} is null")
            return value
        if isinstance(node, Aggregate):
            return self.table.aggregate(node.func, node.field)
        if isinstance(node, Unary):
            operand = self.evaluate(node.operand, row)
            return (not operand) if node.op == "!" else -operand

        # Both operands are always evaluated; a null on either side excludes the row.
        left = self.evaluate(node.left, row)
        right = self.evaluate(node.right, row)
        op = node.op
        if op == "&&":
            return bool(left) and bool(right)
        if op == "||":
            return bool(left) or bool(right)
        if op in _COMPARE:
            return _COMPARE[op](left, right)
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if right == 0:
            raise DivisionByZero("Division by zero")
        return left / right


def eval_row(e: Union[ParsedExpr, Node], row: Row, table: DataTable) -> Result:
    """
    Evaluate an expression for one row.

    Args:
        e: Expression typed against ``table``'s schema
        row: Row tuple of ``table``
        table: Table used for aggregates

    Returns:
        Number, string, temporal ms or boolean
    """
    return Evaluator(table).evaluate(_root(e), row)


def eval_constant(e: Union[ParsedExpr, Node], table: DataTable, bindings: Optional[Dict[str, Value]] = None) -> Result:
    """Evaluate an expression that reads no row (literals, aggregates, bindings)."""
    return Evaluator(table, bindings).evaluate(_root(e), None)


def select_rows(
    e: Union[ParsedExpr, Node], table: DataTable, rows: Optional[Iterable[int]] = None
) -> List[int]:
    """
    Indices of rows for which a predicate holds.

    Rows that hit a null operand are excluded with a single warning.

    Args:
        e: Boolean expression
        table: Table to scan
        rows: Candidate row indices, all rows by default

    Returns:
        Ascending row indices
    """
    root = _root(e)
    if root.vtype != VType.BOOLEAN:
        raise ExprTypeError(f"Row selection needs a boolean expression, got {root.vtype.value}")
    evaluator = Evaluator(table)
    candidates = range(table.row_count) if rows is None else sorted(set(rows))
    selected = []
    skipped = 0
    for i in candidates:
        try:
            if evaluator.evaluate(root, table.rows[i]):
                selected.append(i)
        except NullOperand:
            skipped += 1
    if skipped:
        logger.warning(
            f"{skipped} row(s) excluded from selection because of null operands",
            extra=diagnostic("NullOperand"),
        )
    return selected
