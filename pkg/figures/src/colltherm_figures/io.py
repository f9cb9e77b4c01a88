"""Readers for the colltherm CSV schemas.

Only the documented CSV interface is consumed here: a block of #-prefixed
configuration comments, a header row, and data rows whose final column is
an in-band error annotation (empty on success). Rows with a non-empty
error annotation are masked out of the numeric payload.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

HEATMAP_COLUMNS = ["gamma_tau_se", "g_tau_sa", "f1", "f1_over_fth",
                   "n_truncated", "richardson_err", "error"]
SCALING_COLUMNS = ["prep", "n", "f_n", "f_n_over_fth", "f_n_over_n_f1", "error"]


class SchemaError(ValueError):
    """The CSV header does not match the expected sweep schema."""


@dataclass
class HeatmapData:
    gamma: np.ndarray            # sorted axis values, shape (ng,)
    theta: np.ndarray            # sorted axis values, shape (nt,)
    ratio: np.ma.MaskedArray     # f1_over_fth on the (ng, nt) grid
    comments: list[str] = field(default_factory=list)
    n_masked: int = 0


@dataclass
class SeriesData:
    prep: str
    n: np.ndarray
    f_over_fth: np.ndarray
    f_over_linear: np.ndarray    # f_n / (n * f1)


@dataclass
class ScalingData:
    series: list[SeriesData]
    comments: list[str] = field(default_factory=list)


def _read_rows(path: str | Path, expected_header: list[str]):
    comments: list[str] = []
    data_lines: list[str] = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            comments.append(line[1:].strip())
        elif line.strip():
            data_lines.append(line)
    if not data_lines:
        raise SchemaError(f"{path}: no header row found")
    parsed = list(csv.reader(data_lines))
    header, rows = parsed[0], parsed[1:]
    if header != expected_header:
        raise SchemaError(
            f"{path}: header {header} does not match expected {expected_header}"
        )
    return comments, rows


def axis_scale_hint(comments: list[str], axis_name: str) -> str | None:
    """Extract a lin/log hint from the generator's axis comment, if present."""
    for comment in comments:
        if comment.startswith(f"{axis_name} axis = "):
            parts = comment.split("=", 1)[1].strip().split(":")
            if len(parts) == 4 and parts[3] in ("lin", "log"):
                return parts[3]
    return None


def read_heatmap(path: str | Path) -> HeatmapData:
    comments, rows = _read_rows(path, HEATMAP_COLUMNS)
    gammas, thetas, records = [], [], []
    n_masked = 0
    for row in rows:
        g, t = float(row[0]), float(row[1])
        gammas.append(g)
        thetas.append(t)
        if row[6]:
            records.append((g, t, math.nan))
            n_masked += 1
        else:
            records.append((g, t, float(row[3])))
    gamma = np.unique(np.asarray(gammas))
    theta = np.unique(np.asarray(thetas))
    grid = np.full((gamma.size, theta.size), math.nan)
    gi = {v: i for i, v in enumerate(gamma)}
    ti = {v: i for i, v in enumerate(theta)}
    for g, t, val in records:
        grid[gi[g], ti[t]] = val
    return HeatmapData(
        gamma=gamma,
        theta=theta,
        ratio=np.ma.masked_invalid(grid),
        comments=comments,
        n_masked=n_masked,
    )


def read_scaling(path: str | Path) -> ScalingData:
    comments, rows = _read_rows(path, SCALING_COLUMNS)
    by_prep: dict[str, list[tuple[int, float, float]]] = {}
    for row in rows:
        if row[5]:
            continue  # error rows carry no plottable payload
        by_prep.setdefault(row[0], []).append(
            (int(row[1]), float(row[3]), float(row[4]))
        )
    series = []
    for prep, entries in by_prep.items():
        entries.sort()
        n = np.array([e[0] for e in entries])
        series.append(
            SeriesData(
                prep=prep,
                n=n,
                f_over_fth=np.array([e[1] for e in entries]),
                f_over_linear=np.array([e[2] for e in entries]),
            )
        )
    if not series:
        raise SchemaError(f"{path}: no usable data rows")
    return ScalingData(series=series, comments=comments)
