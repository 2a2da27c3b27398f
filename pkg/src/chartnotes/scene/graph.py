"""Scene graph: pixel-space nodes with semantic tags."""

from dataclasses import asdict, dataclass, field, is_dataclass
from enum import Enum
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple, Union

from ..data import Value
from ..geometry import Rect, Shape, union_rects


class ChartPartKind(str, Enum):
    """Named chart parts that annotations may target."""
    TITLE = "title"
    LEGEND = "legend"
    SUBTITLE = "subtitle"
    CAPTION = "caption"


class AxisPartKind(str, Enum):
    """Axis components; ``domain`` is the baseline and is not targetable."""
    LABEL = "label"
    TICK = "tick"
    GRID = "grid"
    TICK_LABEL = "tick-label"
    DOMAIN = "domain"


@dataclass(frozen=True)
class Canvas:
    pass


@dataclass(frozen=True)
class PlotArea:
    pass


@dataclass(frozen=True)
class Group:
    name: str


@dataclass(frozen=True)
class MarkTag:
    """One data row rendered as a mark."""
    row_index: int


@dataclass(frozen=True)
class Series:
    """Path mark joining the rows of one line/area series."""
    index: int
    rows: Tuple[int, ...]


@dataclass(frozen=True)
class AxisPart:
    axis: str
    part: AxisPartKind
    value: Value = None


@dataclass(frozen=True)
class ChartPart:
    part: ChartPartKind


@dataclass(frozen=True)
class AnnotationNode:
    annotation_id: str


SemanticTag = Union[Canvas, PlotArea, Group, MarkTag, Series, AxisPart, ChartPart, AnnotationNode]


@dataclass(frozen=True)
class Paint:
    """Resolved visual style of a chart node."""
    stroke: str = "none"
    stroke_width: float = 0.0
    fill: str = "none"
    opacity: float = 1.0
    font_size: float = 10.0
    font_weight: str = "normal"
    dash: Tuple[float, ...] = ()
    visible: bool = True


INVISIBLE = Paint(visible=False)


@dataclass(frozen=True)
class SceneNode:
    """Node of the scene tree."""
    id: str
    tag: SemanticTag
    bbox: Rect
    geometry: Optional[Shape] = None
    paint: Paint = INVISIBLE
    children: Tuple["SceneNode", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["SceneNode"]:
        """Pre-order traversal."""
        yield self
        for child in self.children:
            yield from child.walk()


def leaf(
    id: str, tag: SemanticTag, geometry: Shape, paint: Paint = INVISIBLE
) -> SceneNode:
    return SceneNode(id=id, tag=tag, bbox=geometry.bbox(), geometry=geometry, paint=paint)


def container(
    id: str,
    tag: SemanticTag,
    children: List[SceneNode],
    base: Optional[Rect] = None,
) -> SceneNode:
    """Group node whose bbox is the union of its children (and ``base``)."""
    boxes = [c.bbox for c in children]
    if base is not None:
        boxes.append(base)
    bbox = union_rects(boxes) if boxes else Rect(0, 0, 0, 0)
    return SceneNode(id=id, tag=tag, bbox=bbox, children=tuple(children))


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def tag_to_dict(tag: SemanticTag) -> Dict[str, Any]:
    payload = {k: _plain(v) for k, v in asdict(tag).items()}
    payload["kind"] = type(tag).__name__
    return payload


@dataclass
class SceneGraph:
    """Immutable scene tree with an id index."""
    root: SceneNode
    width: int
    height: int
    _index: Dict[str, SceneNode] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for node in self.root.walk():
            if node.id in self._index:
                raise ValueError(f"Duplicate scene node id: {node.id}")
            self._index[node.id] = node

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._index

    def get(self, node_id: str) -> SceneNode:
        return self._index[node_id]

    def nodes(self) -> Iterator[SceneNode]:
        return self.root.walk()

    def find(self, predicate: Callable[[SceneNode], bool]) -> List[SceneNode]:
        return [n for n in self.nodes() if predicate(n)]

    def leaves(self) -> List[SceneNode]:
        return [n for n in self.nodes() if n.is_leaf]

    @property
    def canvas(self) -> Rect:
        return Rect(0, 0, self.width, self.height)

    @property
    def plot_area(self) -> Rect:
        return self.get("plot").bbox

    def mark_for_row(self, row: int) -> Optional[SceneNode]:
        node_id = f"mark/{row}"
        return self._index.get(node_id)

    def chart_part(self, part: ChartPartKind) -> Optional[SceneNode]:
        return self._index.get(f"chart/{part.value}")

    def axis_parts(self, axis: str, parts: Tuple[AxisPartKind, ...]) -> List[SceneNode]:
        return self.find(
            lambda n: isinstance(n.tag, AxisPart) and n.tag.axis == axis and n.tag.part in parts
        )

    def to_dict(self) -> Dict[str, Any]:
        """Debug dump used by ``--dump-scene``."""

        def node_dict(node: SceneNode) -> Dict[str, Any]:
            payload: Dict[str, Any] = {
                "id": node.id,
                "tag": tag_to_dict(node.tag),
                "bbox": [node.bbox.x, node.bbox.y, node.bbox.w, node.bbox.h],
            }
            if node.geometry is not None:
                geometry = asdict(node.geometry) if is_dataclass(node.geometry) else {}
                geometry.pop("box", None)
                payload["geometry"] = {"type": type(node.geometry).__name__, **_plain(geometry)}
            if node.children:
                payload["children"] = [node_dict(c) for c in node.children]
            return payload

        return {"width": self.width, "height": self.height, "root": node_dict(self.root)}
