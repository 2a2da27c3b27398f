"""Expression parsing (lark LALR) and static type checking."""

import logging
import math
import string
from functools import lru_cache
from typing import Dict, Mapping, Optional, Union

from lark import Lark, Transformer
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
    VisitError,
)

from ..data import ColumnType, parse_temporal
from ..errors import ExprSyntaxError, ExprTypeError, UnknownField
from .ast import ARITHMETIC, COMPARISONS, Aggregate, Binary, Field, Literal, Node, ParsedExpr, Unary, VType

logger = logging.getLogger(__name__)

Schema = Mapping[str, Union[str, ColumnType]]

GRAMMAR = r"""
?start: or_expr

?or_expr: and_expr
    | or_expr "||" and_expr -> or_

?and_expr: cmp_expr
    | and_expr "&&" cmp_expr -> and_

?cmp_expr: sum_expr
    | sum_expr "<" sum_expr -> lt
    | sum_expr "<=" sum_expr -> le
    | sum_expr ">" sum_expr -> gt
    | sum_expr ">=" sum_expr -> ge
    | sum_expr "==" sum_expr -> eq
    | sum_expr "!=" sum_expr -> ne

?sum_expr: product
    | sum_expr "+" product -> add
    | sum_expr "-" product -> sub

?product: unary
    | product "*" unary -> mul
    | product "/" unary -> div

?unary: atom
    | "!" unary -> not_
    | "-" unary -> neg

?atom: NUMBER -> number
    | string
    | "true" -> true
    | "false" -> false
    | "datum" "." NAME -> field
    | "datum" "[" string "]" -> field
    | AGG_FUNC "(" NAME ")" -> aggregate
    | AGG_FUNC "(" string ")" -> aggregate
    | "(" or_expr ")"

string: DQ_STRING | SQ_STRING

AGG_FUNC.2: "min" | "max" | "mean" | "sum" | "count"
NAME: /[A-Za-z_][A-Za-z0-9_]*/
NUMBER: /(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?/
DQ_STRING: /"(\\.|[^"\\])*"/
SQ_STRING: /'(\\.|[^'\\])*'/

%import common.WS
%ignore WS
"""

_OPS = {
    "lt": "<",
    "le": "<=",
    "gt": ">",
    "ge": ">=",
    "eq": "==",
    "ne": "!=",
    "add": "+",
    "sub": "-",
    "mul": "*",
    "div": "/",
    "and_": "&&",
    "or_": "||",
}


_ESCAPES = {
    '"': '"',
    "'": "'",
    "\\": "\\",
    "/": "/",
    "b": "\b",
    "f": "\f",
    "n": "\n",
    "r": "\r",
    "t": "\t",
}


def _hex4(body: str, i: int) -> Optional[int]:
    digits = body[i : i + 4]
    if len(digits) == 4 and all(c in string.hexdigits for c in digits):
        return int(digits, 16)
    return None


def unescape(body: str, offset: int = 0) -> str:
    """
    Decode the escapes of a string literal body (quotes stripped).

    Accepts the JSON escapes plus \\' so both quote styles and the
    output of ``pretty`` read back unchanged.

    Args:
        body: Literal text between the quotes
        offset: Position of ``body`` in the expression source

    Raises:
        ExprSyntaxError: For an unknown escape or a malformed \\u sequence
    """
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        code = body[i + 1] if i + 1 < len(body) else ""
        if code and code in _ESCAPES:
            out.append(_ESCAPES[code])
            i += 2
            continue
        if code == "u":
            cp = _hex4(body, i + 2)
            if cp is not None:
                i += 6
                # surrogate pair
                if 0xD800 <= cp < 0xDC00 and body[i : i + 2] == "\\u":
                    low = _hex4(body, i + 2)
                    if low is not None and 0xDC00 <= low < 0xE000:
                        cp = 0x10000 + ((cp - 0xD800) << 10) + (low - 0xDC00)
                        i += 6
                out.append(chr(cp))
                continue
        position = offset + i
        raise ExprSyntaxError(
            f"Invalid escape '\\{code}' in string literal at position {position}", position=position
        )
    return "".join(out)


class ExprTransformer(Transformer):
    """Turns the lark parse tree into untyped AST nodes."""

    def number(self, items):
        return Literal(float(items[0]))

    def string(self, items):
        token = items[0]
        offset = (token.start_pos or 0) + 1
        return Literal(unescape(str(token)[1:-1], offset))

    def true(self, _):
        return Literal(True)

    def false(self, _):
        return Literal(False)

    def field(self, items):
        name = items[0]
        return Field(name.value if isinstance(name, Literal) else str(name))

    def aggregate(self, items):
        func, name = items
        return Aggregate(str(func), name.value if isinstance(name, Literal) else str(name))

    def not_(self, items):
        return Unary("!", items[0])

    def neg(self, items):
        return Unary("-", items[0])


def _binary(op: str):
    def build(self, items):
        return Binary(op, items[0], items[1])

    return build


for _rule, _op in _OPS.items():
    setattr(ExprTransformer, _rule, _binary(_op))


@lru_cache(maxsize=1)
def _lark() -> Lark:
    return Lark(GRAMMAR, parser="lalr", maybe_placeholders=False)


def parse_untyped(src: str) -> Node:
    """Parse source text into an AST without type information."""
    if not src or not src.strip():
        raise ExprSyntaxError("Expression is empty", position=0)
    try:
        tree = _lark().parse(src)
    except UnexpectedEOF as e:
        raise ExprSyntaxError("Unexpected end of expression", position=len(src)) from e
    except UnexpectedCharacters as e:
        raise ExprSyntaxError(
            f"Unexpected character {src[e.pos_in_stream]!r} at position {e.pos_in_stream}",
            position=e.pos_in_stream,
        ) from e
    except UnexpectedToken as e:
        position = e.token.start_pos if e.token.start_pos is not None else len(src)
        if e.token.type == "$END":
            raise ExprSyntaxError("Unexpected end of expression", position=len(src)) from e
        raise ExprSyntaxError(
            f"Unexpected token {str(e.token)!r} at position {position}", position=position
        ) from e
    except UnexpectedInput as e:
        raise ExprSyntaxError(f"Invalid expression: {e}", position=getattr(e, "pos_in_stream", 0) or 0) from e
    try:
        return ExprTransformer().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ExprSyntaxError):
            raise e.orig_exc from None
        raise


_COLUMN_VTYPES = {
    ColumnType.NUMBER: VType.NUMBER,
    ColumnType.STRING: VType.STRING,
    ColumnType.TEMPORAL: VType.TEMPORAL,
}


class TypeChecker:
    """Assigns static types bottom-up against a table schema."""

    def __init__(self, schema: Schema):
        """
        Initialize the checker.

        Args:
            schema: Column name -> column type
        """
        self.schema: Dict[str, VType] = {
            name: _COLUMN_VTYPES[ColumnType(t) if not isinstance(t, ColumnType) else t]
            for name, t in schema.items()
        }

    def _column(self, name: str) -> VType:
        if name not in self.schema:
            raise UnknownField(f"Unknown field '{name}'")
        return self.schema[name]

    def check(self, node: Node) -> Node:
        if isinstance(node, Literal):
            if isinstance(node.value, bool):
                return Literal(node.value, VType.BOOLEAN)
            if isinstance(node.value, str):
                return Literal(node.value, VType.STRING)
            if not math.isfinite(float(node.value)):
                raise ExprSyntaxError(f"Number literal {node.value} is not finite")
            return Literal(float(node.value), VType.NUMBER)

        if isinstance(node, Field):
            return Field(node.name, self._column(node.name))

        if isinstance(node, Aggregate):
            column = self._column(node.field)
            if node.func == "count":
                return Aggregate(node.func, node.field, VType.NUMBER)
            if node.func in ("min", "max") and column in (VType.NUMBER, VType.TEMPORAL):
                return Aggregate(node.func, node.field, column)
            if column == VType.NUMBER:
                return Aggregate(node.func, node.field, VType.NUMBER)
            raise ExprTypeError(f"{node.func}() is not defined for {column.value} field '{node.field}'")

        if isinstance(node, Unary):
            operand = self.check(node.operand)
            expected = VType.BOOLEAN if node.op == "!" else VType.NUMBER
            if operand.vtype != expected:
                raise ExprTypeError(f"Operator '{node.op}' needs a {expected.value}, got {operand.vtype.value}")
            return Unary(node.op, operand, expected)

        left = self.check(node.left)
        right = self.check(node.right)
        if node.op in ARITHMETIC:
            if left.vtype != VType.NUMBER or right.vtype != VType.NUMBER:
                raise ExprTypeError(
                    f"Operator '{node.op}' needs numbers, got {left.vtype.value} and {right.vtype.value}"
                )
            return Binary(node.op, left, right, VType.NUMBER)

        if node.op in COMPARISONS:
            if left.vtype == VType.TEMPORAL:
                right = self._as_temporal(right)
            if right.vtype == VType.TEMPORAL:
                left = self._as_temporal(left)
            if left.vtype != right.vtype:
                raise ExprTypeError(
                    f"Cannot compare {left.vtype.value} with {right.vtype.value}"
                )
            if left.vtype == VType.BOOLEAN and node.op not in ("==", "!="):
                raise ExprTypeError(f"Operator '{node.op}' is not defined for booleans")
            return Binary(node.op, left, right, VType.BOOLEAN)

        if left.vtype != VType.BOOLEAN or right.vtype != VType.BOOLEAN:
            raise ExprTypeError(
                f"Operator '{node.op}' needs booleans, got {left.vtype.value} and {right.vtype.value}"
            )
        return Binary(node.op, left, right, VType.BOOLEAN)

    @staticmethod
    def _as_temporal(node: Node) -> Node:
        if isinstance(node, Literal) and node.vtype == VType.STRING:
            ms = parse_temporal(node.value)
            if ms is None:
                raise ExprTypeError(f"'{node.value}' is not an ISO-8601 date")
            return Literal(ms, VType.TEMPORAL)
        return node


def parse_expr(src: str, schema: Schema) -> ParsedExpr:
    """
    Parse and type-check an expression.

    Args:
        src: Expression text
        schema: Column name -> column type of the bound table

    Returns:
        Typed expression
    """
    root = TypeChecker(schema).check(parse_untyped(src))
    logger.debug(f"Parsed expression {src!r} as {root.vtype.value}")
    return ParsedExpr(src, root)
