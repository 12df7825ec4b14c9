"""Figure export: outlined 2D regions as SVG and 3D regions as box lists.

Each cell is drawn as one outlined polygon (a parallelogram in ambient
coordinates when the frame is not orthonormal). The SVG output carries
no date and a fixed id salt, so equal scenes give equal files.
"""

from __future__ import annotations

import io
import json
import logging
from pathlib import Path
from typing import Sequence, Union

import matplotlib
import numpy as np
from matplotlib.axes import Axes
from matplotlib.figure import Figure
from matplotlib.patches import Polygon

from .documents import encode_cells
from .groups import MatrixGroup
from .region import Region

__all__ = (
    "PALETTE",
    "region_polygons",
    "render_regions",
    "render_chamber_fan",
    "write_svg",
    "box_list",
    "write_box_list",
)

_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)

PALETTE = (
    "#1f4e79",
    "#a23b2a",
    "#2e7d32",
    "#8e6c00",
    "#5e35b1",
    "#00838f",
    "#ad1457",
)
"""Outline colours, cycled over the regions of a figure."""


def region_polygons(region: Region) -> list[np.ndarray]:
    """Ambient corners of each cell, in drawing order."""

    if region.dim != 2:
        raise ValueError("only planar regions can be drawn")
    out = []
    for cell in region.cells:
        x0, y0 = (float(v) for v in cell.lo)
        x1, y1 = (float(v) for v in cell.hi)
        corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        out.append(region.frame.to_ambient(corners))
    return out


def _new_figure() -> tuple[Figure, Axes]:
    fig = Figure(figsize=(5, 5))
    ax = fig.add_subplot(111)
    ax.set_aspect("equal")
    ax.axhline(0.0, color="#999999", lw=0.4)
    ax.axvline(0.0, color="#999999", lw=0.4)
    return fig, ax


def render_regions(
    regions: Sequence[Region],
    labels: Sequence[str] | None = None,
    title: str | None = None,
) -> Figure:
    """Draw planar regions with outlined cells and no fill."""

    fig, ax = _new_figure()
    pts = []
    for i, region in enumerate(regions):
        colour = PALETTE[i % len(PALETTE)]
        label = labels[i] if labels is not None else None
        for j, poly in enumerate(region_polygons(region)):
            ax.add_patch(
                Polygon(
                    poly,
                    closed=True,
                    facecolor="none",
                    edgecolor=colour,
                    lw=0.6,
                    label=label if j == 0 else None,
                )
            )
            pts.append(poly)
    if pts:
        allpts = np.concatenate(pts)
        lo, hi = allpts.min(axis=0), allpts.max(axis=0)
        pad = 0.05 * float(max(hi - lo))
        ax.set_xlim(lo[0] - pad, hi[0] + pad)
        ax.set_ylim(lo[1] - pad, hi[1] + pad)
    if labels is not None:
        ax.legend(loc="upper right", fontsize="small", frameon=False)
    if title:
        ax.set_title(title)
    return fig


def render_chamber_fan(group: MatrixGroup, radius: float = 1.0) -> Figure:
    """Draw the mirrors of a planar reflection group as a fan of lines."""

    fig, ax = _new_figure()
    for g in group:
        if abs(np.linalg.det(g) + 1.0) > 1e-9:
            continue
        w, v = np.linalg.eigh(g)
        normal = v[:, int(np.argmin(w))]
        line = np.array([-normal[1], normal[0]]) * radius
        ax.plot(
            [-line[0], line[0]], [-line[1], line[1]], color="#1f4e79", lw=0.8
        )
    ax.set_xlim(-radius, radius)
    ax.set_ylim(-radius, radius)
    ax.set_title(f"{len(group)} chambers")
    return fig


def write_svg(fig: Figure, path: Union[str, Path]) -> None:
    """Save `fig` as a reproducible SVG file."""

    buf = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": "coxwave"}):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    Path(path).write_text(buf.getvalue())
    _LOG.debug(f"Wrote {path}.")


def box_list(
    regions: Sequence[Region], names: Sequence[str] | None = None
) -> dict[str, object]:
    """The regions as a JSON box list (used for 3D scenes)."""

    if not regions:
        return {"frame": [], "sets": []}
    return {
        "frame": regions[0].frame.basis.tolist(),
        "sets": [
            {
                "name": names[i] if names is not None else f"set_{i}",
                "cells": encode_cells(r.cells),
            }
            for i, r in enumerate(regions)
        ],
    }


def write_box_list(
    regions: Sequence[Region],
    path: Union[str, Path],
    names: Sequence[str] | None = None,
) -> None:
    Path(path).write_text(
        json.dumps(box_list(regions, names), indent=2, sort_keys=True) + "\n"
    )

