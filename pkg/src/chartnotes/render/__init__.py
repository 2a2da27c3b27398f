"""Render module initialization."""

from .svg import LAYERS, SvgDocument, SvgElement, SvgRenderer, fmt, layer_of, render_svg

__all__ = [
    "LAYERS",
    "SvgDocument",
    "SvgElement",
    "SvgRenderer",
    "fmt",
    "layer_of",
    "render_svg",
]
