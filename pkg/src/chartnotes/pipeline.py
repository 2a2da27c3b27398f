"""Stage orchestration: spec → scales → scene → layout → SVG."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from .chart import Channel, Scale, infer_scales
from .config import settings
from .grammar import Spec, load_spec
from .layout import Assembler, OccupancyGrid, ResolvedAnnotation, attach_annotations, build_grid
from .render import render_svg
from .scene import SceneGraph, build_scene

logger = logging.getLogger(__name__)


@dataclass
class CompileResult:
    """Everything one compilation produced."""
    spec: Spec
    scales: Dict[Channel, Scale]
    chart_scene: SceneGraph
    grid: OccupancyGrid
    annotations: List[ResolvedAnnotation]
    rounds: int

    @property
    def scene(self) -> SceneGraph:
        """Chart scene with the annotations attached."""
        return attach_annotations(self.chart_scene, self.annotations)

    def svg(self) -> bytes:
        return render_svg(self.chart_scene, self.annotations)


def compile_spec(
    spec: Spec,
    grid_size: Optional[int] = None,
    placement_budget: Optional[int] = None,
) -> CompileResult:
    """
    Run every stage after parsing.

    Args:
        spec: Parsed spec
        grid_size: Occupancy cell size in pixels
        placement_budget: Maximum search nodes for backtracking placement

    Returns:
        Compilation result
    """
    scales = infer_scales(spec.chart, spec.table, nice=spec.chart.nice, tick_count=settings.tick_count)
    scene = build_scene(spec.chart, spec.table, scales, tick_count=settings.tick_count)
    grid = build_grid(scene, grid_size or settings.grid_size)
    logger.debug(f"Scene has {len(scene.leaves())} leaves; grid is {grid.cols}x{grid.rows} cells")

    assembler = Assembler(spec, scene, scales, grid, placement_budget or settings.placement_budget)
    annotations = assembler.assemble()
    logger.info(f"Assembled {len(annotations)} annotation effect(s) in {assembler.rounds} round(s)")
    return CompileResult(spec, scales, scene, grid, annotations, assembler.rounds)


def compile_file(
    spec_path: Union[str, Path],
    data_path: Optional[Union[str, Path]] = None,
    grid_size: Optional[int] = None,
    placement_budget: Optional[int] = None,
) -> CompileResult:
    """Load a spec file (optionally with a replacement data file) and compile it."""
    spec = load_spec(spec_path, data_override=data_path)
    return compile_spec(spec, grid_size, placement_budget)


PRINT_WIDTH = 80


def pretty_lines(value: Any, indent: int = 0, prefix: str = "", width: int = PRINT_WIDTH) -> List[str]:
    """
    Compact pretty-printing: a container stays on one line when it fits.

    Args:
        value: JSON value
        indent: Indentation of the first line
        prefix: Text before the value on its first line (an object key)
        width: Maximum line width for inline containers

    Returns:
        Printed lines with sorted object keys
    """
    head = " " * indent + prefix
    inline = json.dumps(value, sort_keys=True, separators=(", ", ": "), ensure_ascii=False)
    if not isinstance(value, (dict, list)) or not value or len(head) + len(inline) <= width:
        return [head + inline]
    if isinstance(value, dict):
        items = [(f"{json.dumps(k, ensure_ascii=False)}: ", v) for k, v in sorted(value.items())]
        opening, closing = "{", "}"
    else:
        items = [("", v) for v in value]
        opening, closing = "[", "]"
    lines = [head + opening]
    for k, (key, item) in enumerate(items):
        sub = pretty_lines(item, indent + 2, key, width)
        if k < len(items) - 1:
            sub[-1] += ","
        lines.extend(sub)
    lines.append(" " * indent + closing)
    return lines


def spec_line_counts(spec_path: Union[str, Path]) -> Dict[str, int]:
    """
    Pretty-printed line counts of a spec file.

    The spec is parsed first so that only valid documents are measured.

    Returns:
        ``annotationLines`` for the annotations and ensembles lists,
        ``specLines`` for the whole document
    """
    path = Path(spec_path)
    load_spec(path)
    text = path.read_text(encoding="utf-8")
    doc = yaml.safe_load(text) if path.suffix.lower() in (".yaml", ".yml") else json.loads(text)
    blocks = [doc[key] for key in ("annotations", "ensembles") if key in doc]
    return {
        "annotationLines": sum(len(pretty_lines(b)) for b in blocks),
        "specLines": len(pretty_lines(doc)),
    }
