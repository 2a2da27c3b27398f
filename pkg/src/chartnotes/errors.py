"""Error hierarchy for chartnotes.

Every error carries a stable ``code`` (surfaced in diagnostics), a JSON-pointer
``path`` into the spec document when one applies, and the process exit status
the CLI should use for it.
"""

from typing import Any, Dict, Iterable, Union

PathPart = Union[str, int]


def json_pointer(parts: Iterable[PathPart]) -> str:
    """
    Build a JSON pointer from path components.

    Args:
        parts: Keys and list indices, outermost first

    Returns:
        Pointer string such as ``/annotations/0/targets``
    """
    escaped = [str(p).replace("~", "~0").replace("/", "~1") for p in parts]
    return "".join(f"/{p}" for p in escaped)


class ChartnotesError(ValueError):
    """Base class for all compiler errors."""

    code = "Error"
    exit_status = 1

    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.message = message
        self.path = path

    def __str__(self) -> str:
        if self.path:
            return f"{self.code} at {self.path}: {self.message}"
        return f"{self.code}: {self.message}"

    def to_diagnostic(self) -> Dict[str, Any]:
        """Diagnostic payload written to stderr by the CLI."""
        return {
            "severity": "error",
            "code": self.code,
            "path": self.path,
            "message": self.message,
        }


# Data ingestion

class DataIOError(ChartnotesError):
    code = "DataIOError"
    exit_status = 2


class MalformedCsv(ChartnotesError):
    code = "MalformedCsv"


class MalformedJson(ChartnotesError):
    code = "MalformedJson"


class NestedObject(ChartnotesError):
    code = "NestedObject"


class TypeConflict(ChartnotesError):
    code = "TypeConflict"


class MalformedNumber(ChartnotesError):
    """A numeric cell that overflows to a non-finite float."""

    code = "MalformedNumber"


class InvalidTable(ChartnotesError):
    code = "InvalidTable"


# Chart core

class EncodingError(ChartnotesError):
    code = "EncodingError"


class EmptyDomain(ChartnotesError):
    code = "EmptyDomain"


class DomainMiss(ChartnotesError):
    code = "DomainMiss"


# Expressions

class ExprSyntaxError(ChartnotesError):
    code = "SyntaxError"

    def __init__(self, message: str, position: int = 0, path: str = ""):
        super().__init__(message, path)
        self.position = position


class ExprTypeError(ChartnotesError):
    code = "TypeError"


class UnknownField(ChartnotesError):
    code = "UnknownField"


class NullOperand(ChartnotesError):
    code = "NullOperand"


class DivisionByZero(ChartnotesError):
    code = "DivisionByZero"


# Spec grammar

class SpecIOError(ChartnotesError):
    code = "SpecIOError"
    exit_status = 2


class SchemaError(ChartnotesError):
    code = "SchemaError"


class DuplicateId(ChartnotesError):
    code = "DuplicateId"


class EmptyTargets(ChartnotesError):
    code = "EmptyTargets"


class MultipleEffectsOfType(ChartnotesError):
    code = "MultipleEffectsOfType"


# Layout

class TargetEmpty(ChartnotesError):
    code = "TargetEmpty"


class MissingChartPart(ChartnotesError):
    code = "MissingChartPart"


class UnresolvedReference(ChartnotesError):
    code = "UnresolvedReference"


class CycleUnresolved(ChartnotesError):
    code = "CycleUnresolved"


class StrictModeViolation(ChartnotesError):
    code = "StrictWarnings"


# Command line

class OutputIOError(ChartnotesError):
    code = "OutputIOError"
    exit_status = 2
