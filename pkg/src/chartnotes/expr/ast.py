"""Expression AST nodes and pretty printer."""

import json
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Union

from ..data import format_number, format_temporal

IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
RESERVED = frozenset({"datum", "true", "false", "min", "max", "mean", "sum", "count"})

AGGREGATES = ("min", "max", "mean", "sum", "count")
COMPARISONS = ("<", "<=", ">", ">=", "==", "!=")
ARITHMETIC = ("+", "-", "*", "/")
LOGICAL = ("&&", "||")


class VType(str, Enum):
    """Static value types."""
    NUMBER = "number"
    STRING = "string"
    TEMPORAL = "temporal"
    BOOLEAN = "boolean"


@dataclass(frozen=True)
class Literal:
    value: Union[float, int, str, bool]
    vtype: Optional[VType] = None


@dataclass(frozen=True)
class Field:
    """Row field reference ``datum.<name>``."""
    name: str
    vtype: Optional[VType] = None


@dataclass(frozen=True)
class Aggregate:
    """Whole-column aggregate such as ``max(t)``."""
    func: str
    field: str
    vtype: Optional[VType] = None


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"
    vtype: Optional[VType] = None


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"
    vtype: Optional[VType] = None


Node = Union[Literal, Field, Aggregate, Unary, Binary]


def walk(node: Node) -> Iterator[Node]:
    yield node
    if isinstance(node, Unary):
        yield from walk(node.operand)
    elif isinstance(node, Binary):
        yield from walk(node.left)
        yield from walk(node.right)


def references_datum(node: Node) -> bool:
    """True when the expression reads a row field."""
    return any(isinstance(n, Field) for n in walk(node))


def _plain_name(name: str) -> bool:
    return bool(IDENTIFIER.match(name)) and name not in RESERVED


def _name(name: str) -> str:
    return name if _plain_name(name) else json.dumps(name, ensure_ascii=False)


def pretty(node: Node) -> str:
    """Fully parenthesised source form; reparses to the same tree."""
    if isinstance(node, Literal):
        if node.vtype == VType.BOOLEAN or isinstance(node.value, bool):
            return "true" if node.value else "false"
        if node.vtype == VType.TEMPORAL:
            return json.dumps(format_temporal(int(node.value)))
        if isinstance(node.value, str):
            return json.dumps(node.value, ensure_ascii=False)
        return format_number(float(node.value))
    if isinstance(node, Field):
        if _plain_name(node.name):
            return f"datum.{node.name}"
        return f"datum[{json.dumps(node.name, ensure_ascii=False)}]"
    if isinstance(node, Aggregate):
        return f"{node.func}({_name(node.field)})"
    if isinstance(node, Unary):
        return f"({node.op}{pretty(node.operand)})"
    return f"({pretty(node.left)} {node.op} {pretty(node.right)})"


class ParsedExpr:
    """A type-checked expression together with its source text."""

    def __init__(self, source: str, root: Node):
        """
        Initialize a parsed expression.

        Args:
            source: Original expression text
            root: Typed AST root
        """
        self.source = source
        self.root = root

    @property
    def vtype(self) -> VType:
        return self.root.vtype

    @property
    def is_predicate(self) -> bool:
        return self.root.vtype == VType.BOOLEAN

    @property
    def references_datum(self) -> bool:
        return references_datum(self.root)

    def pretty(self) -> str:
        return pretty(self.root)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParsedExpr):
            return NotImplemented
        return self.root == other.root

    def __hash__(self) -> int:
        return hash(self.root)

    def __repr__(self) -> str:
        return f"ParsedExpr({self.source!r})"
