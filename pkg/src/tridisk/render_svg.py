"""Deterministic SVG figures: polygon, sides, medial axis, disk, witnesses."""
from __future__ import annotations

import numpy as np

from .geometry import SIDE_LABELS, PolygonalQuadrilateral

SIDE_COLORS = {"A1": "#d62728", "B1": "#1f77b4", "A2": "#ff7f0e", "B2": "#2ca02c"}


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def _path(points) -> str:
    return " ".join(
        ("M" if i == 0 else "L") + f" {_fmt(x)} {_fmt(y)}"
        for i, (x, y) in enumerate(points)
    )


def render_svg(
    q: PolygonalQuadrilateral,
    *,
    medial_axis=None,
    disk=None,
    witnesses=(),
    oracle_disk=None,
    size: int = 640,
) -> str:
    """SVG string for a quadrilateral and optional computed results.

    Output bytes are deterministic for identical inputs.
    """
    x0, y0, x1, y1 = q.bbox
    pad = 0.06 * max(x1 - x0, y1 - y0)
    vb = (x0 - pad, y0 - pad, (x1 - x0) + 2 * pad, (y1 - y0) + 2 * pad)
    stroke = max(vb[2], vb[3]) / 300.0

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{_fmt(vb[0])} {_fmt(vb[1])} {_fmt(vb[2])} {_fmt(vb[3])}">',
        # flip y so the figure reads with y upward
        f'<g transform="translate(0 {_fmt(vb[1] * 2 + vb[3])}) scale(1 -1)">',
        f'<path d="{_path(np.vstack([q.vertices, q.vertices[:1]]))}" '
        f'fill="#f5f5f0" stroke="none"/>',
    ]
    for lbl in SIDE_LABELS:
        poly = q.side_polyline(lbl)
        parts.append(
            f'<path d="{_path(poly)}" fill="none" stroke="{SIDE_COLORS[lbl]}" '
            f'stroke-width="{_fmt(2.0 * stroke)}" stroke-linecap="round"/>'
        )
    for k, (vx, vy) in enumerate(q.quad_vertex_points):
        parts.append(
            f'<circle cx="{_fmt(vx)}" cy="{_fmt(vy)}" r="{_fmt(2.4 * stroke)}" '
            f'fill="#333333"/>'
        )

    if medial_axis is not None:
        for edge in medial_axis.edges:
            pts = edge.sample(48 if edge.kind == "parabola" else 2)
            parts.append(
                f'<path d="{_path(pts)}" fill="none" stroke="#777777" '
                f'stroke-width="{_fmt(0.8 * stroke)}" '
                f'stroke-dasharray="{_fmt(3 * stroke)} {_fmt(3 * stroke)}"/>'
            )

    for wit in witnesses:
        path = np.asarray(wit.path if hasattr(wit, "path") else wit)
        parts.append(
            f'<path d="{_path(path)}" fill="none" stroke="#9467bd" '
            f'stroke-width="{_fmt(1.2 * stroke)}" '
            f'stroke-dasharray="{_fmt(5 * stroke)} {_fmt(2 * stroke)}"/>'
        )

    if oracle_disk is not None:
        cx, cy = oracle_disk.center if hasattr(oracle_disk, "center") else oracle_disk["center"]
        r = oracle_disk.radius if hasattr(oracle_disk, "radius") else oracle_disk["radius"]
        parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" fill="none" '
            f'stroke="#bbbbbb" stroke-width="{_fmt(0.8 * stroke)}"/>'
        )

    if disk is not None:
        center = disk.center if hasattr(disk, "center") else disk["center"]
        radius = disk.radius if hasattr(disk, "radius") else disk["radius"]
        contacts = (
            [c.point for c in disk.contacts]
            if hasattr(disk, "contacts")
            else [c["point"] for c in disk["contacts"]]
        )
        parts.append(
            f'<circle cx="{_fmt(center[0])}" cy="{_fmt(center[1])}" r="{_fmt(radius)}" '
            f'fill="none" stroke="#111111" stroke-width="{_fmt(1.4 * stroke)}"/>'
        )
        parts.append(
            f'<circle cx="{_fmt(center[0])}" cy="{_fmt(center[1])}" '
            f'r="{_fmt(1.5 * stroke)}" fill="#111111"/>'
        )
        for px, py in contacts:
            parts.append(
                f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(2.0 * stroke)}" '
                f'fill="#e31a1c" stroke="#ffffff" stroke-width="{_fmt(0.5 * stroke)}"/>'
            )

    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
