"""Utility functions for chartnotes."""

import json
import logging
import sys
from typing import Any, Dict, List, Optional, TextIO

ROOT_LOGGER = "chartnotes"


class JsonLinesFormatter(logging.Formatter):
    """Format log records as one JSON diagnostic per line."""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "severity": record.levelname.lower(),
            "code": getattr(record, "code", record.levelname.title()),
            "path": getattr(record, "path", ""),
            "message": record.getMessage(),
        }
        return json.dumps(payload, sort_keys=True)


class DiagnosticCollector(logging.Handler):
    """Handler that keeps warning-level diagnostics for strict mode."""

    def __init__(self):
        """Initialize an empty collector."""
        super().__init__(level=logging.WARNING)
        self.records: List[logging.LogRecord] = []

    def emit(self, record: logging.LogRecord) -> None:
        self.records.append(record)

    @property
    def warning_count(self) -> int:
        return sum(1 for r in self.records if r.levelno == logging.WARNING)

    def diagnostics(self) -> List[Dict[str, Any]]:
        """Collected records as diagnostic payloads."""
        formatter = JsonLinesFormatter()
        return [json.loads(formatter.format(r)) for r in self.records]


def setup_logging(log_level: str = "WARNING", stream: Optional[TextIO] = None) -> logging.Logger:
    """
    Set up logging configuration.

    Args:
        log_level: Logging level
        stream: Destination stream, stderr by default

    Returns:
        Configured package logger
    """
    logger = logging.getLogger(ROOT_LOGGER)
    for handler in list(logger.handlers):
        if getattr(handler, "_chartnotes_stream", False):
            logger.removeHandler(handler)

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(JsonLinesFormatter())
    handler._chartnotes_stream = True
    logger.addHandler(handler)
    logger.setLevel(getattr(logging, log_level.upper()))
    return logger


def diagnostic(code: str, path: str = "") -> Dict[str, str]:
    """Build the ``extra`` mapping attached to warning records."""
    return {"code": code, "path": path}
