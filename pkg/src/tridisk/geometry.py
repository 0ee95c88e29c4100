"""Planar primitives, the quadrilateral data model and polyline metrics.

Coordinates are float64 throughout.  A quadrilateral is a simple,
counter-clockwise polygon together with four marked vertex indices
(v1..v4) that split the boundary into the sides A1, B1, A2, B2.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    BadQuadIndices,
    DegenerateArea,
    NotSimple,
    OutsidePolygon,
)

SIDE_LABELS = ("A1", "B1", "A2", "B2")
A_SIDES = frozenset({"A1", "A2"})
B_SIDES = frozenset({"B1", "B2"})
OPPOSITE_SIDE = {"A1": "A2", "A2": "A1", "B1": "B2", "B2": "B1"}

# Relative tolerances; all scale with diam(Q).
REL_TOL_GEOM = 1e-9      # generic geometric predicate tolerance
REL_TOL_MA = 1e-6        # medial-axis Hausdorff budget
REL_TOL_GEO = 1e-6       # geodesic accuracy budget


def as_point_array(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected (n, 2) point array, got shape {arr.shape}")
    return arr


def signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def points_to_segments(points: np.ndarray, segs: np.ndarray):
    """Distances and feet from points (m,2) to segments (e,2,2).

    Returns (dist (m,e), feet (m,e,2), tparam (m,e)).
    """
    p = as_point_array(points)[:, None, :]          # (m,1,2)
    a = segs[None, :, 0, :]                          # (1,e,2)
    d = segs[:, 1, :] - segs[:, 0, :]                # (e,2)
    len2 = np.einsum("ij,ij->i", d, d)               # (e,)
    len2 = np.where(len2 < 1e-300, 1.0, len2)
    t = np.einsum("mej,ej->me", p - a, d) / len2
    t = np.clip(t, 0.0, 1.0)
    feet = a + t[..., None] * d[None, :, :]
    diff = p - feet
    dist = np.sqrt(np.einsum("mej,mej->me", diff, diff))
    return dist, feet, t


def point_segment_distance(p, a, b) -> float:
    segs = np.array([[a, b]], dtype=float)
    dist, _, _ = points_to_segments(np.asarray(p, dtype=float), segs)
    return float(dist[0, 0])


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def segments_properly_cross(p1, p2, q1, q2, eps=0.0) -> bool:
    """True iff the open segments cross transversally (shared endpoints do not count)."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    return ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
        (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
    )


def polyline_length(poly: np.ndarray) -> float:
    poly = as_point_array(poly)
    return float(np.sum(np.hypot(*np.diff(poly, axis=0).T)))


def _polyline_segments(poly: np.ndarray) -> np.ndarray:
    poly = as_point_array(poly)
    if len(poly) == 1:
        return np.stack([poly, poly], axis=1)
    return np.stack([poly[:-1], poly[1:]], axis=1)


def distance_point_to_polyline(p, poly) -> float:
    dist, _, _ = points_to_segments(p, _polyline_segments(poly))
    return float(dist.min())


def distances_points_to_polyline(points, poly) -> np.ndarray:
    dist, _, _ = points_to_segments(points, _polyline_segments(poly))
    return dist.min(axis=1)


def _directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """sup over points of polyline a of distance to polyline b.

    Candidates: the vertices of a, the perpendicular feet of b's vertices on
    the segments of a (maxima with a unique nearest point), and dense samples
    refined around the running argmax (covers equidistance crossings).
    """
    a = as_point_array(a)
    segs_b = _polyline_segments(b)

    def dist_to_b(pts):
        d, _, _ = points_to_segments(pts, segs_b)
        return d.min(axis=1)

    cands = [a]
    if len(a) > 1:
        segs_a = _polyline_segments(a)
        _, feet, _ = points_to_segments(b, segs_a)
        cands.append(feet.reshape(-1, 2))
        k = 32
        t = np.linspace(0.0, 1.0, k)
        dense = (
            segs_a[:, None, 0, :] * (1.0 - t)[None, :, None]
            + segs_a[:, None, 1, :] * t[None, :, None]
        ).reshape(-1, 2)
        cands.append(dense)
    pts = np.vstack(cands)
    dists = dist_to_b(pts)
    best_i = int(dists.argmax())
    best = float(dists[best_i])
    # local refinement around the argmax for maxima between samples
    if len(a) > 1:
        p = pts[best_i]
        seg_idx, _, tpar = points_to_segments(p, _polyline_segments(a))
        e = int(seg_idx[0].argmin())
        lo, hi = a[e], a[e + 1]
        t0 = float(tpar[0, e])
        width = 1.0 / 16.0
        for _ in range(8):
            ts = np.clip(np.linspace(t0 - width, t0 + width, 17), 0.0, 1.0)
            cand = lo[None] + ts[:, None] * (hi - lo)[None]
            d = dist_to_b(cand)
            j = int(d.argmax())
            if d[j] > best:
                best, t0 = float(d[j]), float(ts[j])
            width /= 8.0
    return best


def hausdorff_distance(a, b, tol: float | None = None) -> float:
    """Symmetric Hausdorff distance between two polylines (point sets)."""
    a = as_point_array(a)
    b = as_point_array(b)
    return max(_directed_hausdorff(a, b), _directed_hausdorff(b, a))


@dataclass(frozen=True)
class BoundaryFeature:
    """A medial-axis site: a polygon edge or a reflex vertex."""

    kind: str  # "edge" | "reflex_vertex"
    index: int

    def __repr__(self):
        return f"{self.kind}[{self.index}]"


@dataclass(frozen=True)
class Contact:
    point: tuple[float, float]
    labels: frozenset[str]

    def to_json(self):
        return {"point": [self.point[0], self.point[1]], "labels": sorted(self.labels)}


@dataclass(frozen=True)
class ContactDisk:
    center: tuple[float, float]
    radius: float
    contacts: tuple[Contact, ...]

    @property
    def label_set(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for c in self.contacts:
            out = out | c.labels
        return out

    def touches_opposite_pair(self) -> bool:
        labels = self.label_set
        return A_SIDES <= labels or B_SIDES <= labels

    def to_json(self):
        return {
            "center": [self.center[0], self.center[1]],
            "radius": self.radius,
            "contacts": [c.to_json() for c in self.contacts],
            "labels": sorted(self.label_set),
        }


class PolygonalQuadrilateral:
    """Simple CCW polygon with four marked quad-vertices.

    Instances are immutable after construction and safe to share.
    """

    def __init__(self, vertices, quad_indices, sampled: bool = False):
        self.vertices = as_point_array(vertices).copy()
        self.vertices.setflags(write=False)
        self.quad_indices = tuple(int(i) for i in quad_indices)
        self.sampled = bool(sampled)

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, vertices, quad_indices, sampled=False) -> "PolygonalQuadrilateral":
        """Normalize (orientation, duplicate and collinear vertices) then validate."""
        verts = as_point_array(vertices)
        quad = [int(i) for i in quad_indices]
        if len(quad) != 4 or len(set(quad)) != 4:
            raise BadQuadIndices(f"need 4 distinct quad indices, got {quad_indices}")
        if not all(0 <= i < len(verts) for i in quad):
            raise BadQuadIndices(f"quad index out of range: {quad_indices}")

        scale = float(np.ptp(verts, axis=0).max())
        if scale <= 0:
            raise DegenerateArea("all vertices coincide")
        eps = 1e-12 * scale

        if signed_area(verts) < 0:
            n = len(verts)
            verts = verts[::-1].copy()
            # keep v1 first; the marked cycle reverses with the boundary
            quad = [n - 1 - quad[0], n - 1 - quad[3], n - 1 - quad[2], n - 1 - quad[1]]

        # drop duplicate consecutive vertices (never a quad-vertex)
        keep = []
        quad_set = set(quad)
        n = len(verts)
        for i in range(n):
            j = (i + 1) % n
            if np.hypot(*(verts[i] - verts[j])) <= eps and i not in quad_set:
                continue
            keep.append(i)
        verts, quad = _reindex(verts, quad, keep)

        # merge collinear runs, protecting quad-vertices
        changed = True
        while changed:
            changed = False
            n = len(verts)
            keep = []
            for i in range(n):
                if i in set(quad):
                    keep.append(i)
                    continue
                prev = verts[i - 1]
                nxt = verts[(i + 1) % n]
                if abs(_orient(prev, verts[i], nxt)) <= eps * max(
                    np.hypot(*(verts[i] - prev)), np.hypot(*(nxt - verts[i])), eps
                ):
                    changed = True
                    continue
                keep.append(i)
            if changed:
                verts, quad = _reindex(verts, quad, keep)

        # rotate the vertex list so v1 sits at index 0 (preserves side roles)
        n = len(verts)
        shift = quad[0]
        verts = np.roll(verts, -shift, axis=0)
        quad = [(i - shift) % n for i in quad]
        if not (quad[0] == 0 and quad[1] < quad[2] < quad[3]):
            raise BadQuadIndices("quad indices are not in cyclic boundary order")

        q = cls(verts, quad, sampled=sampled)
        validate(q)
        return q

    @classmethod
    def from_json_dict(cls, data: dict) -> "PolygonalQuadrilateral":
        return cls.build(
            data["vertices"],
            data["quad_vertices"],
            sampled=bool(data.get("sampled", False)),
        )

    @classmethod
    def from_file(cls, path) -> "PolygonalQuadrilateral":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))

    def to_json_dict(self) -> dict:
        out = {
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "quad_vertices": list(self.quad_indices),
        }
        if self.sampled:
            out["sampled"] = True
        return out

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json_dict()) + "\n")

    # -- basic measures -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def edges(self) -> np.ndarray:
        """(n, 2, 2) array; edge i runs vertices[i] -> vertices[i+1]."""
        return np.stack([self.vertices, np.roll(self.vertices, -1, axis=0)], axis=1)

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        d = self.edges[:, 1] - self.edges[:, 0]
        return np.hypot(d[:, 0], d[:, 1])

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    @cached_property
    def diameter(self) -> float:
        pts = self.vertices
        if len(pts) > 64:
            from scipy.spatial import ConvexHull

            pts = pts[ConvexHull(pts).vertices]
        diff = pts[:, None, :] - pts[None, :, :]
        return float(np.sqrt((diff ** 2).sum(-1)).max())

    @property
    def tau_geom(self) -> float:
        return REL_TOL_GEOM * self.diameter

    @property
    def tau_contact(self) -> float:
        return max(1e-9, 1e-7 * self.diameter)

    @property
    def tau_ma(self) -> float:
        return REL_TOL_MA * self.diameter

    @property
    def eps_geo(self) -> float:
        return REL_TOL_GEO * self.diameter

    @cached_property
    def area(self) -> float:
        return signed_area(self.vertices)

    # -- sides ----------------------------------------------------------

    @cached_property
    def edge_side(self) -> np.ndarray:
        """Side index (0..3 for A1,B1,A2,B2) owning each edge."""
        n = self.n
        out = np.empty(n, dtype=int)
        for s in range(4):
            lo = self.quad_indices[s]
            hi = self.quad_indices[(s + 1) % 4]
            if hi <= lo:
                hi += n
            for e in range(lo, hi):
                out[e % n] = s
        return out

    def side_of_edge(self, edge_index: int) -> str:
        return SIDE_LABELS[self.edge_side[edge_index % self.n]]

    def side_polyline(self, label: str) -> np.ndarray:
        s = SIDE_LABELS.index(label)
        n = self.n
        lo = self.quad_indices[s]
        hi = self.quad_indices[(s + 1) % 4]
        if hi <= lo:
            hi += n
        idx = [k % n for k in range(lo, hi + 1)]
        return self.vertices[idx]

    def vertex_labels(self, vertex_index: int) -> frozenset[str]:
        """Side label(s) owning a boundary vertex; quad-vertices carry both."""
        i = vertex_index % self.n
        return frozenset({self.side_of_edge((i - 1) % self.n), self.side_of_edge(i)})

    @cached_property
    def quad_vertex_points(self) -> np.ndarray:
        return self.vertices[list(self.quad_indices)]

    # -- angles ---------------------------------------------------------

    @cached_property
    def interior_angles(self) -> np.ndarray:
        prev = np.roll(self.vertices, 1, axis=0)
        nxt = np.roll(self.vertices, -1, axis=0)
        u = self.vertices - prev
        v = nxt - self.vertices
        cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
        dot = (u * v).sum(axis=1)
        turn = np.arctan2(cross, dot)
        return np.pi - turn  # CCW polygon: interior angle = pi - left-turn

    @cached_property
    def reflex_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.interior_angles > np.pi + 1e-12)

    def quad_vertices_convex(self) -> bool:
        return bool(np.all(self.interior_angles[list(self.quad_indices)] < np.pi - 1e-12))

    # -- containment & distances ----------------------------------------

    def contains(self, points, tol: float | None = None) -> np.ndarray:
        """True where a point is inside or within tol of the boundary."""
        if tol is None:
            tol = self.tau_geom
        pts = as_point_array(points)
        x, y = pts[:, 0][:, None], pts[:, 1][:, None]
        a = self.edges[:, 0][None]
        b = self.edges[:, 1][None]
        ax, ay, bx, by = a[..., 0], a[..., 1], b[..., 0], b[..., 1]
        cond = (ay <= y) != (by <= y)
        denom = np.where(by - ay == 0, 1.0, by - ay)
        xc = ax + (y - ay) * (bx - ax) / denom
        inside = (np.sum(cond & (xc > x), axis=1) % 2) == 1
        if tol > 0:
            near = self.distance_to_boundary_many(pts) <= tol
            return inside | near
        return inside

    def distance_to_boundary_many(self, points) -> np.ndarray:
        dist, _, _ = points_to_segments(points, self.edges)
        return dist.min(axis=1)

    def distance_to_boundary(self, p) -> float:
        """Clearance of a point of the closed polygon; raises if strictly outside."""
        d = float(self.distance_to_boundary_many(p)[0])
        if not bool(self.contains(p, tol=self.tau_geom)[0]):
            raise OutsidePolygon(f"point {tuple(np.asarray(p, dtype=float))} lies outside")
        return d

    def nearest_boundary_features(self, p, tol: float):
        """All boundary features within tol of the clearance at p, with feet.

        Edges whose nearest point is a reflex endpoint are reported as that
        reflex-vertex feature instead, matching the medial-axis site model.
        """
        if tol < 0:
            raise ValueError("tol must be >= 0")
        if not bool(self.contains(p, tol=self.tau_geom)[0]):
            raise OutsidePolygon(f"point {tuple(np.asarray(p, dtype=float))} lies outside")
        dist, feet, _ = points_to_segments(p, self.edges)
        dist, feet = dist[0], feet[0]
        d0 = dist.min()
        reflex = set(int(i) for i in self.reflex_vertices)
        out = {}
        snap = max(self.tau_geom, 1e-12)
        for e in np.flatnonzero(dist <= d0 + tol):
            foot = feet[e]
            feat = BoundaryFeature("edge", int(e))
            for v_idx in (int(e), int((e + 1) % self.n)):
                if v_idx in reflex and np.hypot(*(foot - self.vertices[v_idx])) <= snap:
                    feat = BoundaryFeature("reflex_vertex", v_idx)
                    foot = self.vertices[v_idx]
                    break
            key = feat
            if key not in out:
                out[key] = (feat, (float(foot[0]), float(foot[1])))
        return sorted(out.values(), key=lambda fw: (fw[0].kind, fw[0].index))


def _reindex(verts, quad, keep):
    keep = sorted(keep)
    remap = {old: new for new, old in enumerate(keep)}
    for qv in quad:
        if qv not in remap:
            raise BadQuadIndices("quad-vertex was removed during normalization")
    return verts[keep], [remap[qv] for qv in quad]


def validate(q: PolygonalQuadrilateral) -> None:
    """Check all structural invariants; raises a named error on violation."""
    verts = q.vertices
    n = len(verts)
    if n < 3:
        raise DegenerateArea(f"polygon needs >= 3 vertices, has {n}")
    scale = float(np.ptp(verts, axis=0).max())
    if scale <= 0:
        raise DegenerateArea("all vertices coincide")

    lens = q.edge_lengths
    if np.any(lens <= 1e-12 * scale):
        raise DegenerateArea("zero-length edge after normalization")

    eps = 1e-12 * scale * scale
    edges = q.edges
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j == (i + 1) % n) or ((j + 1) % n == i):
                continue
            if segments_properly_cross(edges[i, 0], edges[i, 1], edges[j, 0], edges[j, 1], eps=eps):
                raise NotSimple(f"edges {i} and {j} cross")
            # non-adjacent edges must not touch either
            dist, _, _ = points_to_segments(edges[i], edges[j][None])
            if dist.min() <= 1e-12 * scale:
                raise NotSimple(f"edges {i} and {j} touch")

    area = signed_area(verts)
    if area <= 1e-12 * scale * scale:
        raise DegenerateArea(f"polygon area {area} is not positive")

    quad = q.quad_indices
    if len(set(quad)) != 4:
        raise BadQuadIndices(f"quad indices not distinct: {quad}")
    if not all(0 <= i < n for i in quad):
        raise BadQuadIndices(f"quad index out of range: {quad}")
    rel = [(quad[k] - quad[0]) % n for k in range(4)]
    if not (rel[0] == 0 and rel[1] < rel[2] < rel[3]):
        raise BadQuadIndices(f"quad indices not in cyclic order: {quad}")


def disk_contacts(q: PolygonalQuadrilateral, center, radius: float, tol: float):
    """Boundary contacts of the disk (center, radius), each with its side label(s).

    A feature is a contact when its distance to the center is within tol of
    the radius; a contact at a quad-vertex carries both adjacent side labels.
    Nearby contact points are merged with their labels unioned.
    """
    center = np.asarray(center, float).reshape(2)
    dist, feet, _ = points_to_segments(center, q.edges)
    dist, feet = dist[0], feet[0]
    entries: list[tuple[np.ndarray, frozenset]] = []
    for e in np.flatnonzero(np.abs(dist - radius) <= tol):
        entries.append((feet[int(e)], frozenset({q.side_of_edge(int(e))})))
    vdist = np.hypot(*(q.vertices - center).T)
    for v in np.flatnonzero(np.abs(vdist - radius) <= tol):
        entries.append((q.vertices[int(v)], q.vertex_labels(int(v))))
    merge_r = max(2.0 * tol, 4.0 * q.tau_geom)
    merged: list[list] = []
    for pt, labels in entries:
        for m in merged:
            if np.hypot(*(m[0] - pt)) <= merge_r:
                m[1] = m[1] | labels
                break
        else:
            merged.append([np.asarray(pt, float), labels])
    contacts = [Contact((float(p[0]), float(p[1])), frozenset(lb)) for p, lb in merged]
    contacts.sort(key=lambda c: math.atan2(c.point[1] - center[1], c.point[0] - center[0]))
    return tuple(contacts)


def load_quadrilateral(path) -> PolygonalQuadrilateral:
    return PolygonalQuadrilateral.from_file(path)


def conjugate(q: PolygonalQuadrilateral) -> PolygonalQuadrilateral:
    """Same polygon with quad-vertices shifted by one (A and B sides swap roles)."""
    qi = q.quad_indices
    return PolygonalQuadrilateral(q.vertices, (qi[1], qi[2], qi[3], qi[0]), sampled=q.sampled)
