"""Finding a disk whose boundary meets three sides of the quadrilateral.

The sweep walks the medial axis from the tip at one quad-vertex to the tip
at the opposite one.  Near the start the maximal disks touch the two sides
adjacent to the start vertex; the last parameter at which both are still
touched yields a disk that also touches a third side.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NoneFound, ReflexQuadVertex, SweepFailure
from .geometry import (
    SIDE_LABELS,
    ContactDisk,
    PolygonalQuadrilateral,
    disk_contacts,
    points_to_segments,
)
from .medial_axis import MedialAxisGraph, compute_medial_axis, maximal_disk, tree_path

# sides adjacent to quad-vertex k (0-based): side k starts there, side k-1 ends there
_ADJACENT_SIDES = [((k - 1) % 4, k) for k in range(4)]


def disk_label_matrix(q, centers, radii, tol) -> np.ndarray:
    """(m, 4) booleans: does each disk touch side A1,B1,A2,B2 within tol."""
    centers = np.asarray(centers, float)
    radii = np.asarray(radii, float)
    dist, _, _ = points_to_segments(centers, q.edges)
    contact = np.abs(dist - radii[:, None]) <= tol
    labels = np.zeros((len(centers), 4), dtype=bool)
    for s in range(4):
        cols = np.flatnonzero(q.edge_side == s)
        if len(cols):
            labels[:, s] |= contact[:, cols].any(axis=1)
    qv = q.quad_vertex_points
    vdist = np.sqrt(((centers[:, None, :] - qv[None, :, :]) ** 2).sum(-1))
    vcontact = np.abs(vdist - radii[:, None]) <= tol
    for k in range(4):
        labels[:, k] |= vcontact[:, k]
        labels[:, (k - 1) % 4] |= vcontact[:, k]
    return labels


def classify_contacts(q: PolygonalQuadrilateral, disk, tol: float) -> frozenset[str]:
    """Side labels touched by a disk; quad-vertex contacts count for both sides."""
    if isinstance(disk, ContactDisk):
        center, radius = disk.center, disk.radius
    else:
        center, radius = disk
    labels: frozenset[str] = frozenset()
    for c in disk_contacts(q, center, radius, tol):
        labels = labels | c.labels
    return labels


@dataclass
class SweepTranscript:
    """Samples and label transitions of one medial-axis sweep."""

    start_vertex: int                 # quad-vertex index (0-based) the sweep starts at
    end_vertex: int
    params: np.ndarray                # global path parameters of the samples
    centers: np.ndarray               # (m, 2)
    radii: np.ndarray                 # (m,)
    label_sets: list[frozenset]       # per-sample touched sides
    transitions: list[float] = field(default_factory=list)
    two_component_ok: bool = True     # every sampled disk touched both boundary arcs

    def to_json(self):
        return {
            "start_vertex": self.start_vertex + 1,
            "end_vertex": self.end_vertex + 1,
            "samples": [
                {
                    "t": float(t),
                    "center": [float(c[0]), float(c[1])],
                    "radius": float(r),
                    "labels": sorted(ls),
                }
                for t, c, r, ls in zip(self.params, self.centers, self.radii, self.label_sets)
            ],
            "transitions": [float(t) for t in self.transitions],
            "two_component_ok": self.two_component_ok,
        }


def _labels_along(q, path, params, tol):
    centers = path.points(params)
    radii = q.distance_to_boundary_many(centers)
    mat = disk_label_matrix(q, centers, radii, tol)
    return centers, radii, mat


def _attempt(q, graph: MedialAxisGraph, start_k: int, samples_per_edge: int,
             param_tol: float):
    v_start = q.quad_vertex_points[start_k]
    v_end = q.quad_vertex_points[(start_k + 2) % 4]
    tip_tol = max(1e-5 * q.diameter, 10 * q.tau_geom)
    tip_a = graph.node_near(v_start, tip_tol)
    tip_b = graph.node_near(v_end, tip_tol)
    if tip_a is None or tip_b is None:
        return None
    path = tree_path(graph, tip_a, tip_b)

    m = max(8, samples_per_edge) * path.n_edges
    eps = 1.0 / (4.0 * m)
    params = np.linspace(eps, 1.0 - eps, m)
    centers, radii, mat = _labels_along(q, path, params, q.tau_contact)
    # the transition search uses a near-exact contact tolerance so the located
    # parameter is not blurred by the reporting band tau_contact
    tau_sharp = 1e-12 * q.diameter
    mat_sharp = disk_label_matrix(q, centers, radii, tau_sharp)

    adj_before, adj_after = _ADJACENT_SIDES[start_k]
    target = mat_sharp[:, adj_before] & mat_sharp[:, adj_after]
    if not target[0]:
        return None

    label_rows = [frozenset(SIDE_LABELS[j] for j in np.flatnonzero(row)) for row in mat]
    transitions = []
    for i in range(m - 1):
        if label_rows[i] != label_rows[i + 1]:
            transitions.append(
                _bisect_change(q, path, params[i], params[i + 1], label_rows[i], param_tol)
            )

    arc1 = mat[:, 0] | mat[:, 1] if start_k in (0, 2) else mat[:, 1] | mat[:, 2]
    arc2 = mat[:, 2] | mat[:, 3] if start_k in (0, 2) else mat[:, 3] | mat[:, 0]
    transcript = SweepTranscript(
        start_vertex=start_k,
        end_vertex=(start_k + 2) % 4,
        params=params,
        centers=centers,
        radii=radii,
        label_sets=label_rows,
        transitions=transitions,
        two_component_ok=bool(np.all(arc1 & arc2)),
    )

    true_idx = np.flatnonzero(target)
    last_true = int(true_idx[-1])
    if last_true == m - 1:
        s_star = params[-1]
    else:
        s_star = _bisect_predicate(
            q, path, params[last_true], params[last_true + 1],
            (adj_before, adj_after), param_tol, tau_sharp,
        )
    center = path.point(s_star)
    disk = maximal_disk(q, center)
    return disk, transcript


def _bisect_change(q, path, s_lo, s_hi, left_labels, param_tol):
    tol = q.tau_contact
    for _ in range(80):
        if s_hi - s_lo <= param_tol:
            break
        mid = 0.5 * (s_lo + s_hi)
        _, _, mat = _labels_along(q, path, np.array([mid]), tol)
        labels = frozenset(SIDE_LABELS[j] for j in np.flatnonzero(mat[0]))
        if labels == left_labels:
            s_lo = mid
        else:
            s_hi = mid
    return 0.5 * (s_lo + s_hi)


def _bisect_predicate(q, path, s_true, s_false, side_pair, param_tol, tol):
    for _ in range(80):
        if s_false - s_true <= param_tol:
            break
        mid = 0.5 * (s_true + s_false)
        _, _, mat = _labels_along(q, path, np.array([mid]), tol)
        if mat[0, side_pair[0]] and mat[0, side_pair[1]]:
            s_true = mid
        else:
            s_false = mid
    return s_true


def find_three_side_disk(
    q: PolygonalQuadrilateral,
    *,
    graph: MedialAxisGraph | None = None,
    samples_per_edge: int = 256,
    param_tol: float = 1e-10,
) -> tuple[ContactDisk, SweepTranscript]:
    """Disk inside q whose boundary touches at least three sides.

    Sweeps the medial-axis path between opposite quad-vertex tips; requires
    every quad-vertex to be convex (route other inputs through the
    approximation pipeline first).
    """
    angles = q.interior_angles[list(q.quad_indices)]
    if np.any(angles >= np.pi - 1e-12):
        bad = [k + 1 for k in range(4) if angles[k] >= np.pi - 1e-12]
        raise ReflexQuadVertex(f"quad-vertices v{bad} are not convex")
    if graph is None:
        graph = compute_medial_axis(q)

    for start_k in (0, 1):
        got = _attempt(q, graph, start_k, samples_per_edge, param_tol)
        if got is None:
            continue
        disk, transcript = got
        labels = disk.label_set
        if len(labels) >= 3 and disk.touches_opposite_pair():
            return disk, transcript
    raise SweepFailure(
        "no sweep parameter with three touched sides was found on either diagonal"
    )


def brute_force_three_side_disk(q: PolygonalQuadrilateral, grid_n: int = 128) -> ContactDisk:
    """Independent grid oracle: largest sampled maximal disk with >= 3 side labels."""
    if grid_n < 16:
        raise ValueError("grid_n must be >= 16")
    x0, y0, x1, y1 = q.bbox
    xs = x0 + (np.arange(grid_n) + 0.5) * (x1 - x0) / grid_n
    ys = y0 + (np.arange(grid_n) + 0.5) * (y1 - y0) / grid_n
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    inside = q.contains(pts, tol=0.0)
    pts = pts[inside]
    if not len(pts):
        raise NoneFound("no interior grid points")
    radii = q.distance_to_boundary_many(pts)
    keep = radii > 0
    pts, radii = pts[keep], radii[keep]
    tol = 2.0 * q.diameter / grid_n
    mat = disk_label_matrix(q, pts, radii, tol)
    counts = mat.sum(axis=1)
    cand = np.flatnonzero(counts >= 3)
    if not len(cand):
        raise NoneFound(f"no grid point with three side contacts at grid_n={grid_n}")
    r_best = radii[cand].max()
    ties = cand[radii[cand] >= r_best - 1e-15]
    order = np.lexsort((pts[ties, 1], pts[ties, 0]))
    pick = ties[order[0]]
    center = pts[pick]
    return ContactDisk(
        (float(center[0]), float(center[1])),
        float(radii[pick]),
        disk_contacts(q, center, float(radii[pick]), tol),
    )
