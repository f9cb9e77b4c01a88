"""Figure rendering for colltherm sweep CSVs."""

from .io import HeatmapData, ScalingData, SchemaError, read_heatmap, read_scaling
from .render import FigureSpec, RenderResult, load_style, render, render_heatmap, render_scaling

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "HeatmapData",
    "RenderResult",
    "ScalingData",
    "SchemaError",
    "load_style",
    "read_heatmap",
    "read_scaling",
    "render",
    "render_heatmap",
    "render_scaling",
]
