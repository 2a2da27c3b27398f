"""Test configuration file for pytest."""

import copy
import logging
from pathlib import Path

import pytest

from chartnotes.data import table_from_rows
from chartnotes.grammar import parse_spec
from chartnotes.pipeline import compile_spec
from chartnotes.utils import ROOT_LOGGER

from .corpus import ROWS, make_spec

DEMOS = Path(__file__).resolve().parent.parent / "demos"


@pytest.fixture(autouse=True)
def reset_package_logging():
    """Drop stream handlers that CLI invocations install on the package logger."""
    yield
    logger = logging.getLogger(ROOT_LOGGER)
    for handler in list(logger.handlers):
        if getattr(handler, "_chartnotes_stream", False):
            logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def rows():
    return copy.deepcopy(ROWS)


@pytest.fixture
def table(rows):
    return table_from_rows(rows)


@pytest.fixture
def compile_doc():
    """Parse and compile a spec document."""

    def run(doc, **options):
        return compile_spec(parse_spec(doc), **options)

    return run


@pytest.fixture
def bar_result(compile_doc):
    return compile_doc(make_spec())


@pytest.fixture
def demos_dir():
    return DEMOS
