"""Render sweep CSVs to raster figures.

Uses the object-oriented matplotlib API (no pyplot, no global state), so
identical inputs with a pinned style yield byte-identical images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .io import HeatmapData, ScalingData, axis_scale_hint, read_heatmap, read_scaling

DEFAULT_STYLE = {
    "cmap": "viridis",
    "dpi": "150",
    "width": "6.0",
    "height": "4.5",
    "contour_color": "black",
}

_MARKERS = {"g": "o", "e": "s", "plus": "x"}
_FALLBACK_MARKERS = ["^", "v", "D", "*"]


@dataclass
class FigureSpec:
    """What to render: input CSV, figure kind, output path, style hints."""

    csv_path: str
    kind: str  # "heatmap" | "scaling"
    out_path: str
    x_scale: str | None = None  # lin | log | None = take the CSV's hint
    y_scale: str | None = None
    style: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in ("heatmap", "scaling"):
            raise ValueError(f"unknown figure kind {self.kind!r}")
        for key, value in (("x_scale", self.x_scale), ("y_scale", self.y_scale)):
            if value is not None and value not in ("lin", "log"):
                raise ValueError(f"{key} must be lin or log, got {value!r}")

    def styled(self, key: str) -> str:
        return self.style.get(key, DEFAULT_STYLE[key])


@dataclass
class RenderResult:
    path: str
    contour_found: bool | None = None
    n_series: int = 0


def load_style(path: str | Path) -> dict:
    """Plain key = value style file; unknown keys are passed through."""
    style = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        style[key.strip()] = value.strip()
    return style


def _new_axes(spec: FigureSpec):
    fig = Figure(
        figsize=(float(spec.styled("width")), float(spec.styled("height"))),
        dpi=float(spec.styled("dpi")),
    )
    return fig, fig.add_subplot()


def _scale_for(spec_value: str | None, data: HeatmapData, axis_name: str) -> str:
    if spec_value is not None:
        return spec_value
    return axis_scale_hint(data.comments, axis_name) or "lin"


def render_heatmap(spec: FigureSpec) -> RenderResult:
    """Heatmap of f1_over_fth with a dotted level-1 contour overlay."""
    data: HeatmapData = read_heatmap(spec.csv_path)
    fig, ax = _new_axes(spec)

    theta_grid, gamma_grid = np.meshgrid(data.theta, data.gamma)
    mesh = ax.pcolormesh(gamma_grid, theta_grid, data.ratio,
                         cmap=spec.styled("cmap"), shading="nearest")
    fig.colorbar(mesh, ax=ax, label="F1 / F_th")

    contour_found = False
    finite = data.ratio.compressed()
    if finite.size and finite.min() < 1.0 < finite.max():
        contours = ax.contour(gamma_grid, theta_grid, data.ratio, levels=[1.0],
                              colors=spec.styled("contour_color"),
                              linestyles="dotted")
        contour_found = any(len(seg) > 0 for seg in contours.allsegs[0])
    if not contour_found:
        print(f"{spec.csv_path}: data never crosses F1 = F_th, contour omitted")

    if _scale_for(spec.x_scale, data, "gamma_tau_se") == "log":
        ax.set_xscale("log")
    if _scale_for(spec.y_scale, data, "g_tau_sa") == "log":
        ax.set_yscale("log")
    ax.set_xlabel("gamma tau_SE")
    ax.set_ylabel("g tau_SA")
    fig.savefig(spec.out_path)
    return RenderResult(path=spec.out_path, contour_found=contour_found, n_series=1)


def render_scaling(spec: FigureSpec) -> RenderResult:
    """Log-log QFI scaling per preparation with dotted N*F1 reference lines."""
    data: ScalingData = read_scaling(spec.csv_path)
    fig, ax = _new_axes(spec)

    for i, series in enumerate(data.series):
        marker = _MARKERS.get(series.prep, _FALLBACK_MARKERS[i % len(_FALLBACK_MARKERS)])
        points = ax.plot(series.n, series.f_over_fth, marker=marker, linestyle="none",
                         label=series.prep)
        color = points[0].get_color()
        # individual-measurement reference: N times the N = 1 value
        f1 = series.f_over_fth[series.n == 1]
        if f1.size:
            ax.plot(series.n, series.n * f1[0], linestyle="dotted", color=color)

    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("block length N")
    ax.set_ylabel("F_N / F_th")
    ax.legend(title="preparation")
    fig.savefig(spec.out_path)
    return RenderResult(path=spec.out_path, contour_found=None,
                        n_series=len(data.series))


def render(spec: FigureSpec) -> RenderResult:
    if spec.kind == "heatmap":
        return render_heatmap(spec)
    return render_scaling(spec)
