"""Seeded instance families for tests and the command line."""
from __future__ import annotations

import numpy as np

from .errors import TridiskError
from .geometry import PolygonalQuadrilateral

FAMILIES = ("convex", "orthogonal", "perturbed-rect", "crescent-sampled")


def random_convex_quadrilateral(rng: np.random.Generator) -> PolygonalQuadrilateral:
    """Convex 4-gon with the corners as quad-vertices."""
    for _ in range(100):
        angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, 4))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * np.pi]]))
        if gaps.min() < 0.35:
            continue
        aspect = rng.uniform(0.4, 1.0)
        rot = rng.uniform(0.0, np.pi)
        scale = rng.uniform(0.5, 2.0)
        pts = np.column_stack([np.cos(angles), aspect * np.sin(angles)]) * scale
        c, s = np.cos(rot), np.sin(rot)
        pts = pts @ np.array([[c, s], [-s, c]])
        pts += rng.uniform(-1.0, 1.0, 2)
        try:
            return PolygonalQuadrilateral.build(pts, [0, 1, 2, 3])
        except TridiskError:
            continue
    raise TridiskError("convex quadrilateral generation failed")


def random_convex_polygon(rng: np.random.Generator, n: int) -> PolygonalQuadrilateral:
    """Convex n-gon (5 <= n <= 12) with four spread vertices marked."""
    for _ in range(100):
        angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, n))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * np.pi]]))
        if gaps.min() < 0.5 / n or gaps.max() > 2.5 * 2.0 * np.pi / n:
            continue
        aspect = rng.uniform(0.6, 1.0)
        pts = np.column_stack([np.cos(angles), aspect * np.sin(angles)])
        quad = [0, n // 4, n // 2, (3 * n) // 4]
        try:
            return PolygonalQuadrilateral.build(pts, quad)
        except TridiskError:
            continue
    raise TridiskError(f"convex {n}-gon generation failed")


def random_orthogonal_quadrilateral(rng: np.random.Generator) -> PolygonalQuadrilateral:
    """Rectilinear polygon (axis-aligned edges) with the four outer corners marked.

    A rectangle with up to one rectangular notch carved into each side; the
    notch mouths become reflex vertices while the marked corners stay at 90
    degrees.
    """
    for _ in range(100):
        w = rng.uniform(1.5, 3.0)
        h = rng.uniform(1.0, 2.0)
        sides = {
            "bottom": [(0.0, 0.0), (w, 0.0)],
            "right": [(w, 0.0), (w, h)],
            "top": [(w, h), (0.0, h)],
            "left": [(0.0, h), (0.0, 0.0)],
        }
        verts: list[tuple[float, float]] = []
        quad_idx = []
        for name in ("bottom", "right", "top", "left"):
            (x0, y0), (x1, y1) = sides[name]
            quad_idx.append(len(verts))
            verts.append((x0, y0))
            if rng.uniform() < 0.75:
                span = w if name in ("bottom", "top") else h
                depth_max = 0.35 * (h if name in ("bottom", "top") else w)
                a = rng.uniform(0.15, 0.55) * span
                b = a + rng.uniform(0.15, 0.35) * span
                if b >= 0.9 * span:
                    b = 0.9 * span
                d = rng.uniform(0.3, 1.0) * depth_max
                ux, uy = (x1 - x0), (y1 - y0)
                norm = max(abs(ux), abs(uy))
                ux, uy = ux / norm, uy / norm
                nx, ny = -uy, ux  # inward normal of this side
                pa = (x0 + ux * a, y0 + uy * a)
                pb = (x0 + ux * b, y0 + uy * b)
                verts.append(pa)
                verts.append((pa[0] + nx * d, pa[1] + ny * d))
                verts.append((pb[0] + nx * d, pb[1] + ny * d))
                verts.append(pb)
        try:
            return PolygonalQuadrilateral.build(verts, quad_idx)
        except TridiskError:
            continue
    raise TridiskError("orthogonal quadrilateral generation failed")


def random_perturbed_rectangle(rng: np.random.Generator) -> PolygonalQuadrilateral:
    """Rectangle with jittered interior side points; corners stay marked."""
    for _ in range(100):
        w = rng.uniform(1.2, 2.5)
        h = rng.uniform(0.8, 1.6)
        jitter = 0.04 * min(w, h)
        corners = [(0.0, 0.0), (w, 0.0), (w, h), (0.0, h)]
        verts = []
        quad_idx = []
        for k in range(4):
            x0, y0 = corners[k]
            x1, y1 = corners[(k + 1) % 4]
            quad_idx.append(len(verts))
            verts.append((x0, y0))
            for t in np.sort(rng.uniform(0.25, 0.75, rng.integers(1, 3))):
                px = x0 + t * (x1 - x0) + rng.uniform(-jitter, jitter)
                py = y0 + t * (y1 - y0) + rng.uniform(-jitter, jitter)
                verts.append((px, py))
        try:
            return PolygonalQuadrilateral.build(verts, quad_idx)
        except TridiskError:
            continue
    raise TridiskError("perturbed rectangle generation failed")


def _circle_through(p0, p1, sagitta_point):
    """Center and radius of the circle through three points."""
    ax, ay = p0
    bx, by = p1
    cx, cy = sagitta_point
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    ux = ((ax ** 2 + ay ** 2) * (by - cy) + (bx ** 2 + by ** 2) * (cy - ay)
          + (cx ** 2 + cy ** 2) * (ay - by)) / d
    uy = ((ax ** 2 + ay ** 2) * (cx - bx) + (bx ** 2 + by ** 2) * (ax - cx)
          + (cx ** 2 + cy ** 2) * (bx - ax)) / d
    r = float(np.hypot(ax - ux, ay - uy))
    return (ux, uy), r


def crescent_sampled(
    n: int = 192, outer_sagitta: float = 0.8, inner_sagitta: float = 0.3,
    rng: np.random.Generator | None = None,
) -> PolygonalQuadrilateral:
    """Lune between two circular arcs through (-1,0) and (1,0), sampled.

    Quad-vertices: the two cusps and two points on the outer arc, so one side
    is the whole inner (concave) arc.
    """
    if rng is not None:
        outer_sagitta *= rng.uniform(0.9, 1.1)
        inner_sagitta *= rng.uniform(0.85, 1.15)
    (ocx, ocy), orad = _circle_through((1.0, 0.0), (-1.0, 0.0), (0.0, outer_sagitta))
    (icx, icy), irad = _circle_through((1.0, 0.0), (-1.0, 0.0), (0.0, inner_sagitta))
    n_outer = (2 * n) // 3
    n_inner = n - n_outer

    a0 = np.arctan2(0.0 - ocy, 1.0 - ocx)
    a1 = np.arctan2(0.0 - ocy, -1.0 - ocx)
    if a1 < a0:
        a1 += 2.0 * np.pi
    touter = np.linspace(a0, a1, n_outer + 1)
    outer = np.column_stack([ocx + orad * np.cos(touter), ocy + orad * np.sin(touter)])

    b0 = np.arctan2(0.0 - icy, -1.0 - icx)
    b1 = np.arctan2(0.0 - icy, 1.0 - icx)
    if b0 < b1:
        b0 += 2.0 * np.pi
    tinner = np.linspace(b0, b1, n_inner + 1)
    inner = np.column_stack([icx + irad * np.cos(tinner), icy + irad * np.sin(tinner)])

    verts = np.vstack([outer[:-1], inner[:-1]])
    quad = [0, n_outer // 3, (2 * n_outer) // 3, n_outer]
    return PolygonalQuadrilateral.build(verts, quad, sampled=True)


def generate(family: str, seed: int, count: int) -> list[PolygonalQuadrilateral]:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        if family == "convex":
            out.append(random_convex_quadrilateral(rng))
        elif family == "orthogonal":
            out.append(random_orthogonal_quadrilateral(rng))
        elif family == "perturbed-rect":
            out.append(random_perturbed_rectangle(rng))
        else:
            out.append(crescent_sampled(rng=rng))
    return out
