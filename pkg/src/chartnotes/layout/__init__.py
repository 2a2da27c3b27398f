"""Layout: target resolution, placement, connector routing and assembly."""

from .assembler import (
    Assembler,
    ResolvedAnnotation,
    annotation_node,
    assemble,
    attach_annotations,
)
from .placement import (
    Candidate,
    OccupancyGrid,
    PlacementRequest,
    PlacementResult,
    PlacementSearch,
    build_grid,
    candidate_anchors,
    clamp_to,
    place_all,
)
from .resolver import ResolvedTarget, TargetResolver, map_fixed, merge_targets, resolve_target
from .routing import arrowhead, arrowheads, catmull_rom, facing_points, route_between, route_connector

__all__ = [
    "Assembler",
    "ResolvedAnnotation",
    "annotation_node",
    "assemble",
    "attach_annotations",
    "Candidate",
    "OccupancyGrid",
    "PlacementRequest",
    "PlacementResult",
    "PlacementSearch",
    "build_grid",
    "candidate_anchors",
    "clamp_to",
    "place_all",
    "ResolvedTarget",
    "TargetResolver",
    "map_fixed",
    "merge_targets",
    "resolve_target",
    "arrowhead",
    "arrowheads",
    "catmull_rom",
    "facing_points",
    "route_between",
    "route_connector",
]
