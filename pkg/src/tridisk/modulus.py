"""Numerical estimate of the quadrilateral modulus.

The modulus equals the Dirichlet energy of the harmonic potential that is 0
on side A1, 1 on side A2 and insulated on the B-sides.  The estimator
rasterizes the interior on a cell grid, classifies boundary faces by the
nearest side polyline, imposes the Dirichlet data at the faces (half-cell
spacing; exact on axis-aligned rectangles) and solves the 5-point scheme by
conjugate gradients.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage, sparse
from scipy.sparse.linalg import cg, spsolve

from .errors import RasterTooCoarse
from .geometry import (
    SIDE_LABELS,
    PolygonalQuadrilateral,
    conjugate,
    distances_points_to_polyline,
)

# tie-break priority for boundary-face side assignment: a-sides win at
# quad-vertices, then lower label in boundary order
_TIE_PRIORITY = {"A1": 0, "A2": 1, "B1": 2, "B2": 3}


@dataclass(frozen=True)
class ModulusEstimate:
    value: float
    resolution: float      # requested cell spacing h
    residual: float        # relative linear-solver residual
    method: str
    cells: int             # number of interior unknowns

    def to_json(self):
        return {
            "value": self.value,
            "resolution": self.resolution,
            "residual": self.residual,
            "method": self.method,
            "cells": self.cells,
        }


def _classify_faces(q, face_pts):
    dists = np.column_stack(
        [distances_points_to_polyline(face_pts, q.side_polyline(lbl)) for lbl in SIDE_LABELS]
    )
    d_min = dists.min(axis=1)
    out = np.empty(len(face_pts), dtype=int)
    tol = 1e-12 * q.diameter
    prio = np.array([_TIE_PRIORITY[lbl] for lbl in SIDE_LABELS])
    for i in range(len(face_pts)):
        tied = np.flatnonzero(dists[i] <= d_min[i] + tol)
        out[i] = tied[np.argmin(prio[tied])]
    return out


def estimate_modulus(q: PolygonalQuadrilateral, h: float, *, richardson: bool = False,
                     _solver: str = "cg") -> ModulusEstimate:
    """Estimate the modulus of the path family joining the a-sides.

    h is the target cell spacing; it must be at most diam(Q)/32.  With
    richardson=True the h and h/2 results are extrapolated.
    """
    if h > q.diameter / 32.0 + 1e-15:
        raise RasterTooCoarse(f"h={h} exceeds diam/32={q.diameter / 32}")
    if richardson:
        coarse = estimate_modulus(q, h, richardson=False, _solver=_solver)
        fine = estimate_modulus(q, h / 2.0, richardson=False, _solver=_solver)
        return ModulusEstimate(
            value=2.0 * fine.value - coarse.value,
            resolution=h,
            residual=max(coarse.residual, fine.residual),
            method=fine.method + "-richardson",
            cells=fine.cells,
        )

    x0, y0, x1, y1 = q.bbox
    nx = max(4, round((x1 - x0) / h))
    ny = max(4, round((y1 - y0) / h))
    hx = (x1 - x0) / nx
    hy = (y1 - y0) / ny

    xs = x0 + (np.arange(nx) + 0.5) * hx
    ys = y0 + (np.arange(ny) + 0.5) * hy
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    centers = np.column_stack([gx.ravel(), gy.ravel()])
    inside = q.contains(centers, tol=0.0).reshape(nx, ny)

    labels, count = ndimage.label(inside)
    if count == 0:
        raise RasterTooCoarse("no interior cells at this resolution")
    if count > 1:
        raise RasterTooCoarse(f"interior raster splits into {count} components")

    idx = -np.ones((nx, ny), dtype=int)
    idx[inside] = np.arange(inside.sum())
    n_unknown = int(inside.sum())

    rows, cols, vals = [], [], []
    diag = np.zeros(n_unknown)
    rhs = np.zeros(n_unknown)
    w_h = hy / hx  # conductance of a horizontal (x-direction) face
    w_v = hx / hy

    dirichlet_faces = []  # (cell_index, weight, value, side)
    side_face_count = np.zeros(4, dtype=int)
    interior_pairs = []

    face_pts = []
    face_meta = []  # (cell_index, weight)
    for axis, (dx, dy, w) in enumerate(((1, 0, w_h), (0, 1, w_v))):
        a = inside[: nx - dx, : ny - dy]
        b = inside[dx:, dy:]
        both = a & b
        ia = idx[: nx - dx, : ny - dy][both]
        ib = idx[dx:, dy:][both]
        interior_pairs.append((ia, ib, w))
        # boundary faces: one side in, the other out (or off-grid)
        for sign in (1, -1):
            if sign > 0:
                inn = a & ~b
                cells = idx[: nx - dx, : ny - dy][inn]
                ci = np.argwhere(inn)
            else:
                inn = b & ~a
                cells = idx[dx:, dy:][inn]
                ci = np.argwhere(inn) + np.array([dx, dy])
            # face midpoint sits half a cell from the center toward the neighbor
            mx = x0 + (ci[:, 0] + 0.5) * hx + sign * dx * 0.5 * hx
            my = y0 + (ci[:, 1] + 0.5) * hy + sign * dy * 0.5 * hy
            face_pts.append(np.column_stack([mx, my]))
            face_meta.append(np.column_stack([cells, np.full(len(cells), w)]))
        # grid-boundary faces of the first/last slabs
    # faces on the outer frame of the grid
    for axis, (w, coord) in enumerate(((w_h, 0), (w_v, 1))):
        for edge_side, pos in ((0, 0), (1, None)):
            if axis == 0:
                line = inside[0] if edge_side == 0 else inside[-1]
                cells = idx[0][line] if edge_side == 0 else idx[-1][line]
                ci = np.flatnonzero(line)
                if edge_side == 0:
                    mx = np.full(len(ci), x0)
                else:
                    mx = np.full(len(ci), x1)
                my = y0 + (ci + 0.5) * hy
            else:
                line = inside[:, 0] if edge_side == 0 else inside[:, -1]
                cells = idx[:, 0][line] if edge_side == 0 else idx[:, -1][line]
                ci = np.flatnonzero(line)
                if edge_side == 0:
                    my = np.full(len(ci), y0)
                else:
                    my = np.full(len(ci), y1)
                mx = x0 + (ci + 0.5) * hx
            face_pts.append(np.column_stack([mx, my]))
            face_meta.append(np.column_stack([cells, np.full(len(cells), w)]))

    face_pts = np.vstack([f for f in face_pts if len(f)]) if any(len(f) for f in face_pts) else np.zeros((0, 2))
    face_meta = np.vstack([m for m in face_meta if len(m)]) if any(len(m) for m in face_meta) else np.zeros((0, 2))
    if len(face_pts):
        face_sides = _classify_faces(q, face_pts)
    else:
        face_sides = np.zeros(0, dtype=int)

    for (cell, w), side in zip(face_meta, face_sides):
        cell = int(cell)
        side_face_count[side] += 1
        if SIDE_LABELS[side] == "A1":
            diag[cell] += 2.0 * w
            dirichlet_faces.append((cell, w, 0.0))
        elif SIDE_LABELS[side] == "A2":
            diag[cell] += 2.0 * w
            rhs[cell] += 2.0 * w
            dirichlet_faces.append((cell, w, 1.0))
        # B-sides: zero-flux, no equation contribution

    if np.any(side_face_count == 0):
        missing = [SIDE_LABELS[i] for i in np.flatnonzero(side_face_count == 0)]
        raise RasterTooCoarse(f"sides {missing} own no boundary faces at h={h}")

    for ia, ib, w in interior_pairs:
        rows.extend([ia, ib])
        cols.extend([ib, ia])
        vals.extend([-w * np.ones(len(ia)), -w * np.ones(len(ia))])
        np.add.at(diag, ia, w)
        np.add.at(diag, ib, w)

    rows = np.concatenate([np.concatenate(rows), np.arange(n_unknown)])
    cols = np.concatenate([np.concatenate(cols), np.arange(n_unknown)])
    vals = np.concatenate([np.concatenate(vals), diag])
    mat = sparse.csr_matrix((vals, (rows, cols)), shape=(n_unknown, n_unknown))

    if _solver == "cg":
        u, info = cg(mat, rhs, rtol=1e-10, atol=0.0, maxiter=20 * n_unknown)
        if info != 0:
            u = spsolve(mat.tocsc(), rhs)
            method = "fd5-spsolve"
        else:
            method = "fd5-cg"
    else:
        u = spsolve(mat.tocsc(), rhs)
        method = "fd5-spsolve"
    bnorm = float(np.linalg.norm(rhs)) or 1.0
    residual = float(np.linalg.norm(mat @ u - rhs)) / bnorm

    energy = 0.0
    for ia, ib, w in interior_pairs:
        du = u[ia] - u[ib]
        energy += float(w * np.sum(du * du))
    for cell, w, value in dirichlet_faces:
        du = u[cell] - value
        energy += float(2.0 * w * du * du)

    return ModulusEstimate(
        value=float(energy),
        resolution=h,
        residual=residual,
        method=method,
        cells=n_unknown,
    )


def conjugate_modulus_check(q: PolygonalQuadrilateral, h: float, **kw) -> float:
    """Product of the modulus and the modulus of the conjugate labeling (-> 1)."""
    m1 = estimate_modulus(q, h, **kw)
    m2 = estimate_modulus(conjugate(q), h, **kw)
    return m1.value * m2.value
