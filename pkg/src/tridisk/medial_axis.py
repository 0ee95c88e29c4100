"""Medial axes of simple polygons as clearance-parameterized trees.

Sites are polygon edges and reflex vertices.  Edge-edge and vertex-vertex
pairs contribute straight bisector pieces, edge-vertex pairs contribute
parabolic arcs.  Pieces are found by tracing: every convex vertex seeds the
bisector of its two incident edges, each trace marches along the pair's
bisector curve and is clipped by bisection where a third site reaches the
same distance; branch points spawn the continuation pairs.  Tracing (rather
than window-scanning every pair) keeps near-degenerate branch clusters of
densely sampled smooth boundaries connected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, Disconnected, OutsidePolygon
from .geometry import (
    BoundaryFeature,
    ContactDisk,
    PolygonalQuadrilateral,
    disk_contacts,
    points_to_segments,
)


def _perp(v):
    return np.array([-v[1], v[0]])


def _pair_key(f1: BoundaryFeature, f2: BoundaryFeature):
    a = (f1.kind, f1.index)
    b = (f2.kind, f2.index)
    return (a, b) if a <= b else (b, a)


class _LineCurve:
    """Straight bisector piece: edge-edge or reflex-reflex pair."""

    kind = "segment"

    def __init__(self, anchor, direction, window, dist_normal=None, dist_offset=0.0,
                 dist_point=None, end_reasons=None):
        self.anchor = np.asarray(anchor, float)
        self.direction = np.asarray(direction, float)
        self.window = window
        self._n = None if dist_normal is None else np.asarray(dist_normal, float)
        self._c = float(dist_offset)
        self._p = None if dist_point is None else np.asarray(dist_point, float)
        self.end_reasons = end_reasons or {"lo": None, "hi": None}

    def points(self, t):
        t = np.atleast_1d(np.asarray(t, float))
        return self.anchor[None, :] + t[:, None] * self.direction[None, :]

    def d_pair(self, t):
        pts = self.points(t)
        if self._n is not None:
            return np.maximum(pts @ self._n - self._c, 0.0)
        return np.hypot(pts[:, 0] - self._p[0], pts[:, 1] - self._p[1])

    def speed(self, t):
        return np.ones_like(np.atleast_1d(np.asarray(t, float)))


class _ParabolaCurve:
    """Parabolic bisector piece: edge (directrix) vs reflex vertex (focus)."""

    kind = "parabola"

    def __init__(self, origin, tangent, normal, u_focus, h_focus, window, end_reasons):
        self.origin = np.asarray(origin, float)
        self.tangent = np.asarray(tangent, float)
        self.normal = np.asarray(normal, float)
        self.u_focus = float(u_focus)
        self.h_focus = float(h_focus)
        self.window = window
        self.end_reasons = end_reasons

    def _eta(self, u):
        return ((u - self.u_focus) ** 2 + self.h_focus ** 2) / (2.0 * self.h_focus)

    def points(self, t):
        u = np.atleast_1d(np.asarray(t, float))
        eta = self._eta(u)
        return (
            self.origin[None, :]
            + u[:, None] * self.tangent[None, :]
            + eta[:, None] * self.normal[None, :]
        )

    def d_pair(self, t):
        return self._eta(np.atleast_1d(np.asarray(t, float)))

    def speed(self, t):
        u = np.atleast_1d(np.asarray(t, float))
        return np.sqrt(1.0 + ((u - self.u_focus) / self.h_focus) ** 2)

    @property
    def focus(self):
        return self.origin + self.u_focus * self.tangent + self.h_focus * self.normal


@dataclass
class _Piece:
    pair: tuple
    curve: object
    t_lo: float
    t_hi: float
    node_lo: int
    node_hi: int


@dataclass(frozen=True)
class MANode:
    index: int
    point: tuple[float, float]
    clearance: float
    degree: int


class MedialAxisEdge:
    """One bisector piece of the medial axis between two graph nodes."""

    def __init__(self, node_a, node_b, curve, t_lo, t_hi, feature_pair):
        self.node_a = int(node_a)
        self.node_b = int(node_b)
        self.curve = curve
        self.t_lo = float(t_lo)
        self.t_hi = float(t_hi)
        self.feature_pair = feature_pair

    @property
    def kind(self) -> str:
        return self.curve.kind

    def params(self, local_t):
        local_t = np.atleast_1d(np.asarray(local_t, float))
        return self.t_lo + (self.t_hi - self.t_lo) * local_t

    def points(self, local_t) -> np.ndarray:
        return self.curve.points(self.params(local_t))

    def clearances(self, local_t) -> np.ndarray:
        return self.curve.d_pair(self.params(local_t))

    def sample(self, n: int = 64) -> np.ndarray:
        return self.points(np.linspace(0.0, 1.0, n))

    @property
    def length(self) -> float:
        pts = self.sample(33)
        return float(np.hypot(*np.diff(pts, axis=0).T).sum())

    def to_json(self):
        out = {
            "node_ids": [self.node_a, self.node_b],
            "type": self.kind,
            "feature_pair": [[f.kind, f.index] for f in self.feature_pair],
            "polyline": self.sample(64).tolist(),
        }
        if self.kind == "segment":
            pts = self.points(np.array([0.0, 1.0]))
            out["geometry"] = {"p": pts[0].tolist(), "q": pts[1].tolist()}
        else:
            c = self.curve
            out["geometry"] = {
                "focus": c.focus.tolist(),
                "directrix_origin": c.origin.tolist(),
                "directrix_direction": c.tangent.tolist(),
                "u_range": [self.t_lo, self.t_hi],
            }
        return out


class MedialAxisGraph:
    """Tree of bisector pieces with clearances at the nodes."""

    def __init__(self, nodes: list[MANode], edges: list[MedialAxisEdge], repairs: int = 0):
        self.nodes = nodes
        self.edges = edges
        self.repairs = repairs
        self.adjacency: dict[int, list[int]] = {n.index: [] for n in nodes}
        for i, e in enumerate(edges):
            self.adjacency[e.node_a].append(i)
            self.adjacency[e.node_b].append(i)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def tips(self) -> list[MANode]:
        return [n for n in self.nodes if n.degree == 1]

    def node_near(self, point, tol: float):
        point = np.asarray(point, float)
        best, best_d = None, float(tol)
        for n in self.nodes:
            d = math.hypot(n.point[0] - point[0], n.point[1] - point[1])
            if d <= best_d:
                best, best_d = n, d
        return best

    def is_connected(self) -> bool:
        if not self.nodes:
            return False
        seen = {self.nodes[0].index}
        stack = [self.nodes[0].index]
        while stack:
            u = stack.pop()
            for ei in self.adjacency[u]:
                e = self.edges[ei]
                v = e.node_b if e.node_a == u else e.node_a
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(self.nodes)

    def is_tree(self) -> bool:
        return self.is_connected() and self.node_count - self.edge_count == 1

    def sample_all(self, per_edge: int = 64) -> np.ndarray:
        return np.vstack([e.sample(per_edge) for e in self.edges])

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {"x": n.point[0], "y": n.point[1], "clearance": n.clearance}
                for n in self.nodes
            ],
            "edges": [e.to_json() for e in self.edges],
        }


class MAPath:
    """A simple path in the medial axis, parameterized uniformly per edge."""

    def __init__(self, steps: list[tuple[MedialAxisEdge, bool]]):
        self.steps = steps

    @property
    def n_edges(self) -> int:
        return len(self.steps)

    def _locate(self, s):
        m = len(self.steps)
        s = np.clip(np.atleast_1d(np.asarray(s, float)), 0.0, 1.0)
        k = np.minimum((s * m).astype(int), m - 1)
        local = s * m - k
        return k, local

    def points(self, s) -> np.ndarray:
        k, local = self._locate(s)
        out = np.empty((len(k), 2))
        for edge_idx in np.unique(k):
            mask = k == edge_idx
            edge, forward = self.steps[edge_idx]
            t = local[mask] if forward else 1.0 - local[mask]
            out[mask] = edge.points(t)
        return out

    def point(self, s) -> np.ndarray:
        return self.points(s)[0]

    def clearances(self, s) -> np.ndarray:
        k, local = self._locate(s)
        out = np.empty(len(k))
        for edge_idx in np.unique(k):
            mask = k == edge_idx
            edge, forward = self.steps[edge_idx]
            t = local[mask] if forward else 1.0 - local[mask]
            out[mask] = edge.clearances(t)
        return out


def tree_path(graph: MedialAxisGraph, u, v) -> MAPath:
    """Unique simple path between two nodes of the medial-axis tree."""
    u_id = u.index if isinstance(u, MANode) else int(u)
    v_id = v.index if isinstance(v, MANode) else int(v)
    if u_id == v_id:
        raise ValueError("path endpoints must be distinct nodes")
    parent: dict[int, tuple[int, int]] = {u_id: (-1, -1)}
    stack = [u_id]
    while stack and v_id not in parent:
        cur = stack.pop()
        for ei in graph.adjacency[cur]:
            e = graph.edges[ei]
            nxt = e.node_b if e.node_a == cur else e.node_a
            if nxt not in parent:
                parent[nxt] = (cur, ei)
                stack.append(nxt)
    if v_id not in parent:
        raise Disconnected(f"nodes {u_id} and {v_id} are not connected")
    steps = []
    cur = v_id
    while cur != u_id:
        prev, ei = parent[cur]
        e = graph.edges[ei]
        steps.append((e, e.node_a == prev))
        cur = prev
    steps.reverse()
    return MAPath(steps)


# ---------------------------------------------------------------------------
# tracing


class _Tracer:
    def __init__(self, q: PolygonalQuadrilateral):
        self.q = q
        self.diam = q.diameter
        # validity band for "no third feature closer"; kept 3 orders above the
        # fp noise floor so tangential junction overruns stay ~sqrt(2*diam*tau)
        self.tau = 1e-12 * self.diam
        self.r_stitch = 1e-7 * self.diam
        self.step0 = 8.0 * self.r_stitch
        self.max_step = self.diam / 128.0
        self.edges = q.edges
        self.n = q.n
        d = self.edges[:, 1] - self.edges[:, 0]
        self.lengths = np.hypot(d[:, 0], d[:, 1])
        self.dirs = d / self.lengths[:, None]
        self.normals = np.stack([-self.dirs[:, 1], self.dirs[:, 0]], axis=1)
        self.reflex = set(int(i) for i in q.reflex_vertices)
        self._ea = self.edges[:, 0]
        self._eb = self.edges[:, 1]
        self._ev = self.edges[:, 1] - self.edges[:, 0]
        self._elen2 = np.maximum((self._ev ** 2).sum(axis=1), 1e-300)
        self.curves: dict[tuple, object] = {}
        self.node_pos: list[np.ndarray] = []
        self.node_cells: dict[tuple, list[int]] = {}
        self.pieces: list[_Piece] = []
        self.visited: set = set()
        self.worklist: list = []
        self.piece_cap = 80 * self.n + 400

    # -- elementary queries ------------------------------------------------

    def _clear_inside(self, pts):
        """Clearance and inside-or-on flags for (m, 2) points in one pass."""
        pts = np.atleast_2d(pts)
        dist, _, _ = points_to_segments(pts, self.edges)
        clr = dist.min(axis=1)
        x, y = pts[:, 0][:, None], pts[:, 1][:, None]
        a = self.edges[None, :, 0, :]
        b = self.edges[None, :, 1, :]
        cond = (a[..., 1] <= y) != (b[..., 1] <= y)
        denom = np.where(b[..., 1] - a[..., 1] == 0, 1.0, b[..., 1] - a[..., 1])
        xc = a[..., 0] + (y - a[..., 1]) * (b[..., 0] - a[..., 0]) / denom
        parity = (np.sum(cond & (xc > x), axis=1) % 2) == 1
        return clr, parity | (clr <= self.tau)

    def _clearance(self, z) -> float:
        dist, _, _ = points_to_segments(z, self.edges)
        return float(dist.min())

    def _valid_many(self, curve, ts) -> np.ndarray:
        ts = np.atleast_1d(np.asarray(ts, float))
        lo, hi = curve.window
        in_window = (ts >= lo - 1e-15) & (ts <= hi + 1e-15)
        out = np.zeros(len(ts), dtype=bool)
        if not in_window.any():
            return out
        sel = np.flatnonzero(in_window)
        pts = curve.points(ts[sel])
        d = curve.d_pair(ts[sel])
        clr, inside = self._clear_inside(pts)
        out[sel] = inside & (d - clr <= self.tau)
        return out

    def _valid(self, curve, t) -> bool:
        lo, hi = curve.window
        if t < lo - 1e-15 or t > hi + 1e-15:
            return False
        z = curve.points(t)[0]
        d = float(curve.d_pair(t)[0])
        rel = z[None, :] - self._ea
        tt = np.clip((rel * self._ev).sum(axis=1) / self._elen2, 0.0, 1.0)
        dd = rel - tt[:, None] * self._ev
        clr = math.sqrt(float((dd * dd).sum(axis=1).min()))
        if d - clr > self.tau:
            return False
        if clr <= self.tau:
            return True
        ax, ay = self._ea[:, 0], self._ea[:, 1]
        bx, by = self._eb[:, 0], self._eb[:, 1]
        cond = (ay <= z[1]) != (by <= z[1])
        denom = np.where(by - ay == 0, 1.0, by - ay)
        xc = ax + (z[1] - ay) * (bx - ax) / denom
        return bool((np.sum(cond & (xc > z[0])) % 2) == 1)

    # -- curve construction --------------------------------------------------

    def _feature_point(self, f: BoundaryFeature):
        return self.q.vertices[f.index]

    def curve_for(self, f1: BoundaryFeature, f2: BoundaryFeature):
        key = _pair_key(f1, f2)
        if key in self.curves:
            return self.curves[key]
        curve = self._build_curve(key)
        self.curves[key] = curve
        return curve

    def _incident(self, edge_idx: int, vertex_idx: int) -> bool:
        return vertex_idx == edge_idx or vertex_idx == (edge_idx + 1) % self.n

    def _succ_feature(self, vertex_idx: int, leaving_edge: int) -> BoundaryFeature | None:
        """Feature taking over when a slab ends at vertex_idx of leaving_edge."""
        if vertex_idx in self.reflex:
            return BoundaryFeature("reflex_vertex", vertex_idx)
        # vertex_idx is either the start (== leaving_edge) or the end vertex
        if vertex_idx == leaving_edge:
            other = (leaving_edge - 1) % self.n
        else:
            other = (leaving_edge + 1) % self.n
        return BoundaryFeature("edge", other)

    def _build_curve(self, key):
        (k1, i1), (k2, i2) = key
        f1 = BoundaryFeature(k1, i1)
        f2 = BoundaryFeature(k2, i2)
        if k1 == "edge" and k2 == "edge":
            return self._edge_edge_curve(i1, i2)
        if k1 == "edge" and k2 == "reflex_vertex":
            if self._incident(i1, i2):
                return None
            return self._edge_vertex_curve(i1, i2)
        if k1 == "reflex_vertex" and k2 == "edge":
            if self._incident(i2, i1):
                return None
            return self._edge_vertex_curve(i2, i1)
        return self._vertex_vertex_curve(i1, i2)

    def _edge_edge_curve(self, i, j):
        n1, n2 = self.normals[i], self.normals[j]
        dn = n1 - n2
        norm = np.hypot(dn[0], dn[1])
        if norm < 1e-9:
            return None  # parallel facing the same way, or collinear
        c1 = float(n1 @ self.edges[i, 0])
        c2 = float(n2 @ self.edges[j, 0])
        b = c1 - c2
        anchor = dn * (b / (norm * norm))
        direction = _perp(dn) / norm
        lo, hi = -2.0 * self.diam, 2.0 * self.diam
        constraints = []
        for e_idx in (i, j):
            a0 = float((anchor - self.edges[e_idx, 0]) @ self.dirs[e_idx])
            a1 = float(direction @ self.dirs[e_idx])
            constraints.append(("slab", e_idx, a0, a1, 0.0, float(self.lengths[e_idx])))
        s0 = float(n1 @ anchor - c1)
        s1 = float(n1 @ direction)
        constraints.append(("sign", -1, s0, s1, -self.tau, np.inf))
        eps_t = 1e-9 * self.diam
        for ckind, e_idx, a0, a1, vlo, vhi in constraints:
            if abs(a1) < 1e-14:
                if a0 < vlo - eps_t or a0 > vhi + eps_t:
                    return None
                continue
            t_at_lo = (vlo - a0) / a1
            t_at_hi = (vhi - a0) / a1 if np.isfinite(vhi) else math.copysign(np.inf, a1)
            t_min, t_max = min(t_at_lo, t_at_hi), max(t_at_lo, t_at_hi)
            lo = max(lo, t_min)
            hi = min(hi, t_max)
        if hi - lo <= 1e-15:
            return None
        reasons = {
            "lo": self._binding_reasons(constraints, lo, eps_t),
            "hi": self._binding_reasons(constraints, hi, eps_t),
        }
        return _LineCurve(anchor, direction, (lo, hi), dist_normal=n1, dist_offset=c1,
                          end_reasons=reasons)

    def _binding_reasons(self, constraints, t, eps_t):
        out = []
        for ckind, e_idx, a0, a1, vlo, vhi in constraints:
            if ckind != "slab" or abs(a1) < 1e-14:
                continue
            val = a0 + a1 * t
            scale = max(abs(a1), 1.0)
            if abs(val - vlo) <= eps_t * scale:
                out.append((e_idx, e_idx))  # foot at edge start vertex
            elif np.isfinite(vhi) and abs(val - vhi) <= eps_t * scale:
                out.append((e_idx, (e_idx + 1) % self.n))
        return out or None

    def _edge_vertex_curve(self, e_idx, v_idx):
        origin = self.edges[e_idx, 0]
        tangent = self.dirs[e_idx]
        normal = self.normals[e_idx]
        rel = self.q.vertices[v_idx] - origin
        u_f = float(rel @ tangent)
        h_f = float(rel @ normal)
        if h_f <= 1e-12 * self.diam:
            return None  # focus on/behind the directrix line: no interior bisector
        reasons = {
            "lo": [(e_idx, e_idx)],
            "hi": [(e_idx, (e_idx + 1) % self.n)],
        }
        return _ParabolaCurve(origin, tangent, normal, u_f, h_f,
                              (0.0, float(self.lengths[e_idx])), reasons)

    def _vertex_vertex_curve(self, i, j):
        vi, vj = self.q.vertices[i], self.q.vertices[j]
        dv = vj - vi
        norm = np.hypot(dv[0], dv[1])
        if norm < 1e-12 * self.diam:
            return None
        anchor = 0.5 * (vi + vj)
        direction = _perp(dv) / norm
        span = 2.0 * self.diam
        return _LineCurve(anchor, direction, (-span, span), dist_point=vi,
                          end_reasons={"lo": None, "hi": None})

    # -- nodes ----------------------------------------------------------------

    def node_at(self, z) -> int:
        z = np.asarray(z, float)
        cell = (int(math.floor(z[0] / (2 * self.r_stitch))), int(math.floor(z[1] / (2 * self.r_stitch))))
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for idx in self.node_cells.get((cell[0] + dx, cell[1] + dy), ()):
                    if np.hypot(*(self.node_pos[idx] - z)) <= self.r_stitch:
                        return idx
        idx = len(self.node_pos)
        self.node_pos.append(z.copy())
        self.node_cells.setdefault(cell, []).append(idx)
        return idx

    # -- tracing ----------------------------------------------------------

    def run(self):
        self._seed()
        while self.worklist:
            pair, t_start, direction, start_node = self.worklist.pop()
            self._trace(pair, t_start, direction, start_node)
            if len(self.pieces) > self.piece_cap:
                raise DegenerateInput(
                    f"medial-axis tracing exceeded {self.piece_cap} pieces; "
                    "input is likely degenerate"
                )

    def _seed(self):
        angles = self.q.interior_angles
        for v in range(self.n):
            if angles[v] >= np.pi - 1e-12:
                continue
            f1 = BoundaryFeature("edge", (v - 1) % self.n)
            f2 = BoundaryFeature("edge", v)
            pair = _pair_key(f1, f2)
            curve = self.curve_for(f1, f2)
            if curve is None:
                continue
            vert = self.q.vertices[v]
            t_v = float((vert - curve.anchor) @ curve.direction)
            node = self.node_at(vert)
            for direction in (1.0, -1.0):
                self._enqueue(pair, t_v, direction, node)

    def _enqueue(self, pair, t_start, direction, start_node):
        key = (pair, start_node, direction)
        if key in self.visited:
            return
        self.visited.add(key)
        self.worklist.append((pair, t_start, direction, start_node))

    def _trace(self, pair, t_start, direction, start_node):
        curve = self.curves.get(pair)
        if curve is None:
            return
        lo, hi = curve.window
        t_start = min(max(t_start, lo), hi)
        sp = float(curve.speed(t_start)[0])
        t_probe = None
        for probe_len in (2.5 * self.r_stitch, 1e-6 * self.diam, 4e-6 * self.diam):
            cand = t_start + direction * probe_len / sp
            if cand < lo or cand > hi:
                break
            if self._valid(curve, cand):
                t_probe = cand
                break
        if t_probe is None:
            return

        step = self.step0
        t_cur = t_probe
        block = 6
        while True:
            # propose a geometric ladder of steps and evaluate it in one batch
            sp = float(curve.speed(t_cur)[0])
            increments = np.minimum(step * 1.8 ** np.arange(block), self.max_step)
            ts = t_cur + direction * np.cumsum(increments) / sp
            hit = np.zeros(block, dtype=bool)
            if direction > 0:
                over = ts >= hi
                ts[over], hit[over] = hi, True
            else:
                over = ts <= lo
                ts[over], hit[over] = lo, True
            good = self._valid_many(curve, ts)
            bad = np.flatnonzero(~good)
            if len(bad) == 0:
                if hit[-1]:
                    self._finish_window(pair, curve, t_start, ts[-1], direction, start_node)
                    return
                t_cur = ts[-1]
                step = min(step * 1.8 ** block, self.max_step)
                continue
            first_bad = int(bad[0])
            t_good = t_cur if first_bad == 0 else float(ts[first_bad - 1])
            t_bad = float(ts[first_bad])
            if hit[first_bad] and abs(t_bad - t_good) * sp <= 0.25 * self.tau:
                self._finish_window(pair, curve, t_start, t_good, direction, start_node)
                return
            t_event = self._bisect(curve, t_good, t_bad)
            self._finish_event(pair, curve, t_start, t_event, direction, start_node)
            return

    def _bisect(self, curve, t_good, t_bad):
        for _ in range(100):
            sp = float(curve.speed(0.5 * (t_good + t_bad))[0])
            if abs(t_bad - t_good) * sp <= 0.2 * self.tau:
                break
            mid = 0.5 * (t_good + t_bad)
            if self._valid(curve, mid):
                t_good = mid
            else:
                t_bad = mid
        return t_good

    def _add_piece(self, pair, curve, t_a, t_b, node_a, node_b):
        if t_a > t_b:
            t_a, t_b = t_b, t_a
            node_a, node_b = node_b, node_a
        self.pieces.append(_Piece(pair, curve, t_a, t_b, node_a, node_b))

    def _finish_window(self, pair, curve, t_start, t_end, direction, start_node):
        z_end = curve.points(t_end)[0]
        end_node = self.node_at(z_end)
        self.visited.add((pair, end_node, -direction))
        self._add_piece(pair, curve, t_start, t_end, start_node, end_node)
        reasons = curve.end_reasons["lo" if direction < 0 else "hi"]
        if not reasons:
            return
        f1 = BoundaryFeature(*pair[0])
        f2 = BoundaryFeature(*pair[1])
        verts = {v_idx for (_, v_idx) in reasons}
        if len(reasons) >= 2 and len(verts) == 1:
            return  # both slabs end at the shared vertex: a leaf tip
        cands = [f1, f2]
        for leaving_edge, v_idx in reasons:
            succ = self._succ_feature(v_idx, leaving_edge)
            if succ is not None and succ not in cands:
                cands.append(succ)
        self._spawn_pairs(cands, z_end, end_node, skip=_pair_key(f1, f2))

    def _spawn_pairs(self, feats, z, node, skip=None):
        pairs = self._candidate_pairs(feats, z)
        for fa, fb in pairs:
            new_pair = _pair_key(fa, fb)
            if new_pair == skip:
                continue
            new_curve = self.curve_for(fa, fb)
            if new_curve is None:
                continue
            t_on = self._param_of(new_curve, z)
            if t_on is None:
                continue
            for d in (1.0, -1.0):
                self._enqueue(new_pair, t_on, d, node)

    def _candidate_pairs(self, feats, z):
        if len(feats) <= 4:
            return [(feats[i], feats[j]) for i in range(len(feats))
                    for j in range(i + 1, len(feats))]
        # high-degree (near-degenerate) node: the incident bisectors pair up
        # angularly consecutive contact directions only
        angles = []
        for f in feats:
            if f.kind == "edge":
                dist, feet, _ = points_to_segments(z, self.edges[f.index][None])
                w = feet[0, 0]
            else:
                w = self.q.vertices[f.index]
            angles.append(math.atan2(w[1] - z[1], w[0] - z[0]))
        order = np.argsort(angles)
        out = []
        for k in range(len(order)):
            fa = feats[int(order[k])]
            fb = feats[int(order[(k + 1) % len(order)])]
            out.append((fa, fb))
        return out

    def _finish_event(self, pair, curve, t_start, t_event, direction, start_node):
        z_e = curve.points(t_event)[0]
        d_e = float(curve.d_pair(t_event)[0])
        end_node = self.node_at(z_e)
        self.visited.add((pair, end_node, -direction))
        self._add_piece(pair, curve, t_start, t_event, start_node, end_node)
        feats = self._tie_features(z_e, d_e)
        f1 = BoundaryFeature(*pair[0])
        f2 = BoundaryFeature(*pair[1])
        all_feats = [f1, f2] + [f for f in feats if f not in (f1, f2)]
        self._spawn_pairs(all_feats, z_e, end_node)

    def _param_of(self, curve, z):
        if isinstance(curve, _LineCurve):
            t = float((z - curve.anchor) @ curve.direction)
        else:
            t = float((z - curve.origin) @ curve.tangent)
        lo, hi = curve.window
        t = min(max(t, lo), hi)
        z_on = curve.points(t)[0]
        # accept up to the tangential-overrun scale; a bogus spawn just fails
        # its probe and is dropped
        if np.hypot(*(z_on - z)) > max(6.0 * self.r_stitch, 1e-5 * self.diam):
            return None
        return t

    def _tie_features(self, z, d):
        tol_id = max(6.0 * self.tau, 1e-13 * self.diam)
        dist, feet, tpar = points_to_segments(z, self.edges)
        dist, feet, tpar = dist[0], feet[0], tpar[0]
        out = []
        for e in np.flatnonzero(dist <= d + tol_id):
            e = int(e)
            foot = feet[e]
            assigned = False
            for v_idx in (e, (e + 1) % self.n):
                if v_idx in self.reflex and np.hypot(*(foot - self.q.vertices[v_idx])) <= tol_id * 4:
                    out.append(BoundaryFeature("reflex_vertex", v_idx))
                    assigned = True
                    break
            if not assigned:
                out.append(BoundaryFeature("edge", e))
        for v_idx in self.reflex:
            if np.hypot(*(self.q.vertices[v_idx] - z)) <= d + tol_id:
                out.append(BoundaryFeature("reflex_vertex", v_idx))
        uniq = []
        for f in out:
            if f not in uniq:
                uniq.append(f)
        return uniq

    # -- window re-clipping (repair for traced pieces that stepped over a notch)

    def window_clip(self, curve, lo, hi, n=2049):
        ts = np.linspace(lo, hi, n)
        good = self._valid_many(curve, ts)
        intervals = []
        i = 0
        while i < n:
            if not good[i]:
                i += 1
                continue
            j = i
            while j + 1 < n and good[j + 1]:
                j += 1
            a = ts[i] if i == 0 else self._bisect(curve, ts[i], ts[i - 1])
            b = ts[j] if j == n - 1 else self._bisect(curve, ts[j], ts[j + 1])
            intervals.append((a, b))
            i = j + 1
        return intervals


def compute_medial_axis(q: PolygonalQuadrilateral) -> MedialAxisGraph:
    """Medial axis of the polygon as a tree of bisector pieces."""
    if np.any(q.edge_lengths <= 1e-12 * q.diameter):
        raise DegenerateInput("polygon has zero-length edges")
    tracer = _Tracer(q)
    tracer.run()
    pieces = _postprocess_pieces(tracer)
    return _assemble_graph(q, tracer, pieces)


def _postprocess_pieces(tracer: _Tracer) -> list[_Piece]:
    # validate every traced piece; re-clip any that stepped over an invalid notch
    checked: list[_Piece] = []
    for p in tracer.pieces:
        ts = np.linspace(p.t_lo, p.t_hi, 17)[1:-1]
        ok = bool(tracer._valid_many(p.curve, ts).all())
        if ok:
            checked.append(p)
            continue
        for a, b in tracer.window_clip(p.curve, p.t_lo, p.t_hi, n=1025):
            na = tracer.node_at(p.curve.points(a)[0])
            nb = tracer.node_at(p.curve.points(b)[0])
            checked.append(_Piece(p.pair, p.curve, a, b, na, nb))

    # merge duplicate/overlapping intervals on the same curve
    by_pair: dict[tuple, list[_Piece]] = {}
    for p in checked:
        by_pair.setdefault(p.pair, []).append(p)
    merged: list[_Piece] = []
    gap = 2.0 * tracer.r_stitch
    for pair, plist in sorted(by_pair.items()):
        plist.sort(key=lambda p: p.t_lo)
        cur = plist[0]
        for nxt in plist[1:]:
            if nxt.t_lo <= cur.t_hi + gap:
                if nxt.t_hi > cur.t_hi:
                    cur = _Piece(pair, cur.curve, cur.t_lo, nxt.t_hi, cur.node_lo, nxt.node_hi)
            else:
                merged.append(cur)
                cur = nxt
        merged.append(cur)

    # refresh node assignment and drop sub-stitch fragments
    final = []
    for p in merged:
        na = tracer.node_at(p.curve.points(p.t_lo)[0])
        nb = tracer.node_at(p.curve.points(p.t_hi)[0])
        if na == nb:
            continue
        final.append(_Piece(p.pair, p.curve, p.t_lo, p.t_hi, na, nb))
    return final


def _assemble_graph(q, tracer, pieces) -> MedialAxisGraph:
    used = sorted({p.node_lo for p in pieces} | {p.node_hi for p in pieces})
    remap = {old: new for new, old in enumerate(used)}
    positions = [tracer.node_pos[old].copy() for old in used]

    # snap near-vertex nodes onto the exact polygon vertices
    for i, pos in enumerate(positions):
        vd = np.hypot(*(q.vertices - pos).T)
        j = int(vd.argmin())
        if vd[j] <= 2.0 * tracer.r_stitch:
            positions[i] = q.vertices[j].copy()

    edges = [
        MedialAxisEdge(remap[p.node_lo], remap[p.node_hi], p.curve, p.t_lo, p.t_hi,
                       (BoundaryFeature(*p.pair[0]), BoundaryFeature(*p.pair[1])))
        for p in pieces
    ]

    # dissolve degree-2 nodes splitting a single curve
    changed = True
    while changed:
        changed = False
        deg: dict[int, list[int]] = {}
        for i, e in enumerate(edges):
            deg.setdefault(e.node_a, []).append(i)
            deg.setdefault(e.node_b, []).append(i)
        for node, incident in deg.items():
            if len(incident) != 2:
                continue
            e1, e2 = edges[incident[0]], edges[incident[1]]
            if e1 is e2 or e1.feature_pair != e2.feature_pair or e1.curve is not e2.curve:
                continue
            t_vals = sorted([e1.t_lo, e1.t_hi, e2.t_lo, e2.t_hi])
            far_a = e1.node_a if e1.node_b == node else e1.node_b
            far_b = e2.node_a if e2.node_b == node else e2.node_b
            new_edge = MedialAxisEdge(far_a, far_b, e1.curve, t_vals[0], t_vals[-1],
                                      e1.feature_pair)
            edges = [e for i, e in enumerate(edges) if i not in incident] + [new_edge]
            changed = True
            break

    used2 = sorted({e.node_a for e in edges} | {e.node_b for e in edges})
    remap2 = {old: new for new, old in enumerate(used2)}
    positions2 = [positions[old] for old in used2]
    for e in edges:
        e.node_a = remap2[e.node_a]
        e.node_b = remap2[e.node_b]

    repairs = 0
    n_nodes = len(positions2)
    parent = list(range(n_nodes))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    # cycles only arise from near-duplicate coverage of degenerate junction
    # clusters; keep the longest spanning structure and drop the rest
    order = sorted(range(len(edges)), key=lambda i: -edges[i].length)
    keep = []
    for i in order:
        ra, rb = find(edges[i].node_a), find(edges[i].node_b)
        if ra == rb:
            continue
        parent[ra] = rb
        keep.append(i)
    edges = [edges[i] for i in sorted(keep)]
    comps = {find(i) for i in range(n_nodes)}
    pos = np.array(positions2) if n_nodes else np.zeros((0, 2))
    while len(comps) > 1:
        # glue the two closest nodes of different components; a gap beyond the
        # repair radius signals a genuine tracing failure
        roots = np.array([find(i) for i in range(n_nodes)])
        diff = np.hypot(pos[:, None, 0] - pos[None, :, 0], pos[:, None, 1] - pos[None, :, 1])
        diff[roots[:, None] == roots[None, :]] = np.inf
        flat = int(diff.argmin())
        i, j = flat // n_nodes, flat % n_nodes
        gap = float(diff[i, j])
        if not np.isfinite(gap) or gap > 1e-4 * q.diameter:
            raise Disconnected(
                f"medial axis has {len(comps)} components; nearest gap {gap}"
            )
        for e in edges:
            if e.node_a == j:
                e.node_a = i
            if e.node_b == j:
                e.node_b = i
        parent[find(j)] = find(i)
        comps = {find(k) for k in range(n_nodes)}
        repairs += 1

    used3 = sorted({e.node_a for e in edges} | {e.node_b for e in edges})
    remap3 = {old: new for new, old in enumerate(used3)}
    positions3 = np.array([positions2[old] for old in used3])
    degree = np.zeros(len(used3), dtype=int)
    for e in edges:
        e.node_a = remap3[e.node_a]
        e.node_b = remap3[e.node_b]
        degree[e.node_a] += 1
        degree[e.node_b] += 1
    clear = q.distance_to_boundary_many(positions3) if len(positions3) else np.zeros(0)
    nodes = [
        MANode(i, (float(positions3[i, 0]), float(positions3[i, 1])), float(clear[i]),
               int(degree[i]))
        for i in range(len(used3))
    ]
    return MedialAxisGraph(nodes, edges, repairs=repairs)


def maximal_disk(q: PolygonalQuadrilateral, p) -> ContactDisk:
    """Largest disk centered at p inside the closed polygon, with labeled contacts."""
    p = np.asarray(p, float).reshape(2)
    r = q.distance_to_boundary(p)  # raises OutsidePolygon when p is outside
    contacts = disk_contacts(q, p, r, q.tau_contact)
    return ContactDisk((float(p[0]), float(p[1])), float(r), contacts)
