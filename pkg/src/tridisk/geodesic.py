"""Geodesic distances between opposite sides inside the closed polygon.

The solver builds a visibility graph over the polygon vertices plus dense
samples of the two target sides, runs Dijkstra, simplifies the path to its
taut form and slides the endpoints along their sides until the length stops
improving.  An exact straight candidate (minimum distance between the two
side polylines, validated for containment) is always considered as well.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .geometry import (
    PolygonalQuadrilateral,
    points_to_segments,
    polyline_length,
)

_PAIR_LABELS = {"a": ("A1", "A2"), "b": ("B1", "B2")}


@dataclass(frozen=True)
class GeodesicWitness:
    """A polyline realizing (approximately) the internal side distance."""

    path: np.ndarray          # (k, 2) from a point of one side to the opposite side
    length: float
    pair: str                 # "a" or "b"

    def to_json(self):
        return {
            "pair": self.pair,
            "length": self.length,
            "path": [[float(x), float(y)] for x, y in self.path],
        }


def _sample_polyline(poly: np.ndarray, k: int) -> np.ndarray:
    seg = np.diff(poly, axis=0)
    lens = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    total = cum[-1]
    s = np.linspace(0.0, total, k)
    x = np.interp(s, cum, poly[:, 0])
    y = np.interp(s, cum, poly[:, 1])
    return np.column_stack([x, y])


def _nearest_on_polyline(poly: np.ndarray, p) -> np.ndarray:
    segs = np.stack([poly[:-1], poly[1:]], axis=1) if len(poly) > 1 else np.stack([poly, poly], axis=1)
    dist, feet, _ = points_to_segments(np.asarray(p, float), segs)
    j = int(dist[0].argmin())
    return feet[0, j]


class _Visibility:
    def __init__(self, q: PolygonalQuadrilateral):
        self.q = q
        self.edges = q.edges
        self.eps_orient = 1e-12 * q.diameter ** 2
        self.eps_on = 1e-9 * q.diameter
        self.convex = len(q.reflex_vertices) == 0

    def pair_mask(self, pts: np.ndarray, pairs: np.ndarray) -> np.ndarray:
        """Visibility of the segments pts[pairs[:,0]] -> pts[pairs[:,1]]."""
        if self.convex:
            return np.ones(len(pairs), dtype=bool)
        ok = np.ones(len(pairs), dtype=bool)
        c = self.edges[:, 0]
        d = self.edges[:, 1]
        eps = self.eps_orient
        chunk = 20000
        for s in range(0, len(pairs), chunk):
            sl = slice(s, min(s + chunk, len(pairs)))
            p = pts[pairs[sl, 0]]
            r = pts[pairs[sl, 1]]
            # orientation of p and r relative to each boundary edge (c,d)
            d1 = (d[None, :, 0] - c[None, :, 0]) * (p[:, None, 1] - c[None, :, 1]) - (
                d[None, :, 1] - c[None, :, 1]
            ) * (p[:, None, 0] - c[None, :, 0])
            d2 = (d[None, :, 0] - c[None, :, 0]) * (r[:, None, 1] - c[None, :, 1]) - (
                d[None, :, 1] - c[None, :, 1]
            ) * (r[:, None, 0] - c[None, :, 0])
            d3 = (r[:, None, 0] - p[:, None, 0]) * (c[None, :, 1] - p[:, None, 1]) - (
                r[:, None, 1] - p[:, None, 1]
            ) * (c[None, :, 0] - p[:, None, 0])
            d4 = (r[:, None, 0] - p[:, None, 0]) * (d[None, :, 1] - p[:, None, 1]) - (
                r[:, None, 1] - p[:, None, 1]
            ) * (d[None, :, 0] - p[:, None, 0])
            side_pq = ((d1 > eps) & (d2 < -eps)) | ((d1 < -eps) & (d2 > eps))
            side_cd = ((d3 > eps) & (d4 < -eps)) | ((d3 < -eps) & (d4 > eps))
            ok[sl] &= ~(side_pq & side_cd).any(axis=1)
        ok &= self._interior_mask(pts, pairs, ok)
        return ok

    def _interior_mask(self, pts, pairs, ok):
        out = ok.copy()
        idx = np.flatnonzero(ok)
        if not len(idx):
            return out
        verts = self.q.vertices
        chunk = 20000
        for s in range(0, len(idx), chunk):
            sl = idx[s : s + chunk]
            p = pts[pairs[sl, 0]]
            r = pts[pairs[sl, 1]]
            seg = np.stack([p, r], axis=1)
            # boundary vertices on the open segment split it into gaps; every
            # gap midpoint must be inside (catches runs along the boundary line)
            dist, _, tpar = points_to_segments(verts, seg)
            on = (dist.T <= self.eps_on) & (tpar.T > 1e-9) & (tpar.T < 1 - 1e-9)
            tp = np.where(on, tpar.T, np.inf)
            kmax = int(on.sum(axis=1).max()) if on.any() else 0
            if kmax:
                tp = np.sort(tp, axis=1)[:, :kmax]
                tp = np.where(np.isfinite(tp), tp, 1.0)
                ts = np.hstack([np.zeros((len(p), 1)), tp, np.ones((len(p), 1))])
            else:
                ts = np.hstack([np.zeros((len(p), 1)), np.ones((len(p), 1))])
            mids = 0.5 * (ts[:, :-1] + ts[:, 1:])
            # always include the plain quarter points as well
            mids = np.hstack([mids, np.full((len(p), 1), 0.25), np.full((len(p), 1), 0.75)])
            probe = p[:, None, :] + mids[:, :, None] * (r - p)[:, None, :]
            inside = self.q.contains(probe.reshape(-1, 2)).reshape(len(p), -1)
            out[sl] = inside.all(axis=1)
        return out

    def segment_visible(self, a, b) -> bool:
        pts = np.array([a, b], dtype=float)
        return bool(self.pair_mask(pts, np.array([[0, 1]]))[0])


def _direct_candidate(q, vis, side_a, side_b):
    """Exact minimum distance between the two side polylines, if the segment fits.

    For disjoint polylines the minimum is attained with at least one endpoint
    being a polyline vertex, so checking vertex-to-segment feet is exact.
    """
    segs_a = np.stack([side_a[:-1], side_a[1:]], axis=1)
    segs_b = np.stack([side_b[:-1], side_b[1:]], axis=1)
    d_ab, feet_ab, _ = points_to_segments(side_a, segs_b)   # A vertices vs B segments
    d_ba, feet_ba, _ = points_to_segments(side_b, segs_a)
    i_ab = np.unravel_index(int(d_ab.argmin()), d_ab.shape)
    i_ba = np.unravel_index(int(d_ba.argmin()), d_ba.shape)
    if d_ab[i_ab] <= d_ba[i_ba]:
        d, pa, pb = float(d_ab[i_ab]), side_a[i_ab[0]], feet_ab[i_ab]
    else:
        d, pa, pb = float(d_ba[i_ba]), feet_ba[i_ba], side_b[i_ba[0]]
    if not vis.segment_visible(pa, pb):
        return None
    return d, np.array([pa, pb], dtype=float)


def _simplify(path, vis):
    pts = [np.asarray(p, float) for p in path]
    changed = True
    while changed and len(pts) > 2:
        changed = False
        i = 1
        while i < len(pts) - 1:
            if vis.segment_visible(pts[i - 1], pts[i + 1]):
                del pts[i]
                changed = True
            else:
                i += 1
    return pts


def _refine_endpoints(q, vis, pts, side_a, side_b):
    best = polyline_length(np.array(pts))
    for _ in range(300):
        if len(pts) == 2:
            new_a = _nearest_on_polyline(side_a, pts[1])
            pts[0] = new_a
            new_b = _nearest_on_polyline(side_b, pts[0])
            pts[-1] = new_b
        else:
            pts[0] = _nearest_on_polyline(side_a, pts[1])
            pts[-1] = _nearest_on_polyline(side_b, pts[-2])
        cur = polyline_length(np.array(pts))
        if best - cur < q.eps_geo / 10.0:
            best = min(best, cur)
            break
        best = cur
    arr = np.array(pts)
    for i in range(len(arr) - 1):
        if not vis.segment_visible(arr[i], arr[i + 1]):
            return None
    return arr


def _sampled_geodesic(q, vis, side_a, side_b, k):
    verts = q.vertices
    sa = _sample_polyline(side_a, k)
    sb = _sample_polyline(side_b, k)
    pts = np.vstack([verts, sa, sb])
    n_v = len(verts)
    src = np.arange(n_v, n_v + len(sa))
    dst = np.arange(n_v + len(sa), n_v + len(sa) + len(sb))

    n = len(pts)
    iu, ju = np.triu_indices(n, k=1)
    pairs = np.column_stack([iu, ju])
    mask = vis.pair_mask(pts, pairs)
    iu, ju = iu[mask], ju[mask]
    w = np.hypot(*(pts[iu] - pts[ju]).T)
    graph = csr_matrix((np.concatenate([w, w]),
                        (np.concatenate([iu, ju]), np.concatenate([ju, iu]))),
                       shape=(n, n))
    dist, pred, sources = dijkstra(graph, directed=False, indices=src,
                                   return_predecessors=True, min_only=True)
    j = int(dst[np.argmin(dist[dst])])
    if not np.isfinite(dist[j]):
        return np.inf, None
    chain = [j]
    while pred[chain[-1]] >= 0:
        chain.append(int(pred[chain[-1]]))
    chain.reverse()
    path = [pts[i] for i in chain]
    path = _simplify(path, vis)
    raw = np.array(path)
    refined = _refine_endpoints(q, vis, list(path), side_a, side_b)
    if refined is not None and polyline_length(refined) < polyline_length(raw):
        out = refined
    else:
        out = raw
    return polyline_length(out), out


def internal_side_distance(
    q: PolygonalQuadrilateral,
    pair: str,
    *,
    initial_samples: int = 256,
    max_samples: int = 2048,
) -> tuple[float, GeodesicWitness]:
    """Length of the shortest path inside the closed polygon joining the
    two sides of the pair ("a" joins A1-A2, "b" joins B1-B2), with a witness."""
    key = pair.lower()
    if key not in _PAIR_LABELS:
        raise ValueError(f"pair must be 'a' or 'b', got {pair!r}")
    la, lb = _PAIR_LABELS[key]
    side_a = q.side_polyline(la)
    side_b = q.side_polyline(lb)
    vis = _Visibility(q)

    best_val, best_path = np.inf, None
    direct = _direct_candidate(q, vis, side_a, side_b)
    if direct is not None:
        best_val, best_path = direct
        if vis.convex:
            # convexity keeps the straight minimum-distance segment inside,
            # so it already realizes the infimum
            return float(best_val), GeodesicWitness(best_path, float(best_val), key)

    k = initial_samples
    prev = None
    while True:
        val, path = _sampled_geodesic(q, vis, side_a, side_b, k)
        if val < best_val:
            best_val, best_path = val, path
        if prev is not None and abs(val - prev) < q.eps_geo:
            break
        prev = val
        if k >= max_samples:
            break
        k *= 2
    return float(best_val), GeodesicWitness(np.asarray(best_path), float(best_val), key)
