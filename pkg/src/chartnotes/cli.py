"""Command-line interface for chartnotes."""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click
from pydantic import BaseModel, Field, ValidationError, field_validator

from . import __version__
from .config import settings
from .errors import ChartnotesError, OutputIOError, StrictModeViolation
from .utils import ROOT_LOGGER, DiagnosticCollector, setup_logging

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class RunConfig(BaseModel):
    """Validated options of one invocation."""

    spec_path: str = Field(min_length=1)
    data_path: Optional[str] = Field(default=None, min_length=1)
    out_path: Optional[str] = Field(default=None, min_length=1)
    grid_size: int = Field(default=settings.grid_size, ge=1)
    placement_budget: int = Field(default=settings.placement_budget, ge=1)
    dump_scene: bool = False
    strict: bool = False
    log_level: str = settings.log_level

    @field_validator("log_level")
    @classmethod
    def known_level(cls, v: str) -> str:
        if v.upper() not in LOG_LEVELS:
            raise ValueError(f"log level must be one of {', '.join(LOG_LEVELS)}")
        return v.upper()

    @property
    def scene_path(self) -> Path:
        return Path(self.out_path).with_suffix(".scene.json")


def emit(payload: Dict[str, Any]) -> None:
    """Write one diagnostic line to stderr."""
    click.echo(json.dumps(payload, sort_keys=True), err=True)


def _config(**options: Any) -> Optional[RunConfig]:
    try:
        return RunConfig(**options)
    except ValidationError as e:
        first = e.errors()[0]
        field = str(first["loc"][0]) if first["loc"] else ""
        emit({"severity": "error", "code": "InvalidOption", "path": f"/{field}", "message": first["msg"]})
        return None


def run(cfg: RunConfig, action: Callable[[RunConfig], None]) -> int:
    """
    Run ``action`` under diagnostics handling.

    Args:
        cfg: Validated options
        action: Work to perform

    Returns:
        Exit status: 0 success, 1 validation error, 2 I/O error
    """
    setup_logging(cfg.log_level, sys.stderr)
    collector = DiagnosticCollector()
    package_logger = logging.getLogger(ROOT_LOGGER)
    package_logger.addHandler(collector)
    try:
        action(cfg)
    except ChartnotesError as e:
        emit(e.to_diagnostic())
        return e.exit_status
    except Exception as e:
        logger.debug("Unexpected failure", exc_info=True)
        emit({"severity": "error", "code": "InternalError", "path": "", "message": f"{type(e).__name__}: {e}"})
        return 1
    finally:
        package_logger.removeHandler(collector)

    if cfg.strict and collector.warning_count:
        emit(StrictModeViolation(f"{collector.warning_count} warning(s) raised in strict mode").to_diagnostic())
        return 1
    return 0


def _write(path: Path, payload: bytes) -> None:
    try:
        path.write_bytes(payload)
    except OSError as e:
        raise OutputIOError(f"Cannot write {path}: {e}") from e


def _render(cfg: RunConfig) -> None:
    from .pipeline import compile_file

    result = compile_file(cfg.spec_path, cfg.data_path, cfg.grid_size, cfg.placement_budget)
    out = Path(cfg.out_path)
    _write(out, result.svg())
    if cfg.dump_scene:
        text = json.dumps(result.scene.to_dict(), indent=2, sort_keys=True) + "\n"
        _write(cfg.scene_path, text.encode("utf-8"))
    logger.info(f"Wrote {out}")


def _validate(cfg: RunConfig) -> None:
    from .pipeline import compile_file

    compile_file(cfg.spec_path, cfg.data_path, cfg.grid_size, cfg.placement_budget)


spec_option = click.option(
    "--spec", "spec_path", required=True, type=click.Path(), help="Chart + annotation spec (JSON or YAML)"
)
data_option = click.option("--data", "data_path", type=click.Path(), help="Data file replacing the spec's data")
strict_option = click.option("--strict", is_flag=True, help="Treat warnings as errors")
log_level_option = click.option("--log-level", default=settings.log_level, help="Diagnostic level")


class DiagnosticGroup(click.Group):
    """Command group that reports usage errors as JSON diagnostics."""

    def main(self, *args: Any, **kwargs: Any) -> Any:
        kwargs.pop("standalone_mode", None)
        try:
            rv = super().main(*args, standalone_mode=False, **kwargs)
        except click.ClickException as e:
            param = getattr(e, "param", None)
            path = f"/{param.name}" if param is not None and param.name else ""
            emit({"severity": "error", "code": "InvalidOption", "path": path, "message": e.format_message()})
            sys.exit(1)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        sys.exit(rv if isinstance(rv, int) else 0)


@click.group(cls=DiagnosticGroup)
@click.version_option(version=__version__)
def cli():
    """chartnotes - Declarative chart annotations with collision-aware layout."""
    pass


@cli.command()
@spec_option
@data_option
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output SVG file")
@click.option("--grid-size", default=settings.grid_size, help="Occupancy cell size in pixels")
@click.option("--placement-budget", default=settings.placement_budget, help="Placement search budget")
@click.option("--dump-scene", is_flag=True, help="Also write the scene graph as JSON beside the output")
@strict_option
@log_level_option
@click.pass_context
def render(ctx: click.Context, **options: Any):
    """Compile a spec and write the annotated chart as SVG."""
    cfg = _config(**options)
    ctx.exit(1 if cfg is None else run(cfg, _render))


@cli.command()
@spec_option
@data_option
@click.option("--grid-size", default=settings.grid_size, help="Occupancy cell size in pixels")
@click.option("--placement-budget", default=settings.placement_budget, help="Placement search budget")
@strict_option
@log_level_option
@click.pass_context
def validate(ctx: click.Context, **options: Any):
    """Parse, resolve and lay out a spec without writing output."""
    cfg = _config(**options)
    ctx.exit(1 if cfg is None else run(cfg, _validate))


@cli.command()
@spec_option
@log_level_option
@click.pass_context
def stats(ctx: click.Context, **options: Any):
    """Report pretty-printed line counts of a spec's annotation block."""
    from .pipeline import spec_line_counts

    def report(cfg: RunConfig) -> None:
        click.echo(json.dumps(spec_line_counts(cfg.spec_path), sort_keys=True))

    cfg = _config(**options)
    ctx.exit(1 if cfg is None else run(cfg, report))


if __name__ == "__main__":
    cli()
