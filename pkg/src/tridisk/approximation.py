"""Inner polygonal approximations with right angles at the quad-vertices.

Level k insets the target by the margin m_k = diam / 2^(k+3), then replaces
the boundary near each quad-vertex by a corner whose two segments meet at
exactly pi/2 with the corner bisector pointing inward.  A sequence of levels
converges to the target from inside; the finest level's three-side disk
serves as the limit disk for the target.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import Polygon as ShapelyPolygon

from .errors import InsetCollapse, LabelMismatch, NotNested, SideDistanceIncreased
from .geometry import (
    SIDE_LABELS,
    ContactDisk,
    PolygonalQuadrilateral,
    distance_point_to_polyline,
    distances_points_to_polyline,
    hausdorff_distance,
    points_to_segments,
)
from .modulus import estimate_modulus


@dataclass
class ApproximationSequence:
    target: PolygonalQuadrilateral
    levels: list[PolygonalQuadrilateral] = field(default_factory=list)
    margins: list[float] = field(default_factory=list)

    def side_hausdorff(self, level_index: int) -> dict[str, float]:
        level = self.levels[level_index]
        return {
            lbl: hausdorff_distance(level.side_polyline(lbl), self.target.side_polyline(lbl))
            for lbl in SIDE_LABELS
        }


def _margin(target: PolygonalQuadrilateral, k: int) -> float:
    return target.diameter / 2.0 ** (k + 3)


def _inset_ring(target: PolygonalQuadrilateral, m: float) -> np.ndarray:
    poly = ShapelyPolygon(target.vertices)
    inner = poly.buffer(-m, join_style="round", quad_segs=16)
    if inner.is_empty or inner.geom_type != "Polygon" or inner.area <= 0:
        raise InsetCollapse(f"offset at margin {m} is not a single simple region")
    if inner.interiors:
        raise InsetCollapse(f"offset at margin {m} creates holes")
    ring = np.asarray(inner.exterior.coords)[:-1]
    # shapely may orient either way; the quadrilateral builder normalizes later
    # drop near-duplicate consecutive points
    keep = [0]
    for i in range(1, len(ring)):
        if np.hypot(*(ring[i] - ring[keep[-1]])) > 1e-12 * target.diameter:
            keep.append(i)
    if np.hypot(*(ring[keep[-1]] - ring[keep[0]])) <= 1e-12 * target.diameter:
        keep.pop()
    ring = ring[keep]
    if len(ring) < 3:
        raise InsetCollapse(f"offset at margin {m} collapses to a degenerate ring")
    from .geometry import signed_area

    if signed_area(ring) < 0:
        ring = ring[::-1]
    return ring


def _insert_point_on_ring(ring: np.ndarray, point: np.ndarray, tol: float):
    """Ring with the point inserted as a vertex; returns (ring, index)."""
    n = len(ring)
    segs = np.stack([ring, np.roll(ring, -1, axis=0)], axis=1)
    dist, feet, tpar = points_to_segments(point, segs)
    e = int(dist[0].argmin())
    foot, t = feet[0, e], float(tpar[0, e])
    if np.hypot(*(foot - ring[e])) <= tol:
        return ring, e
    if np.hypot(*(foot - ring[(e + 1) % n])) <= tol:
        return ring, (e + 1) % n
    new_ring = np.insert(ring, e + 1, foot, axis=0)
    return new_ring, e + 1


def _right_corner(ring, w_idx, target, m, tol):
    """Replace the ring neighborhood of vertex w_idx by an exact right corner.

    Returns (new_ring, corner_index) or None when no admissible corner fits.
    """
    n = len(ring)
    w = ring[w_idx].astype(float)
    d0 = m / 4.0
    for _ in range(18):
        p_in = _ring_arc_point(ring, w_idx, d0, -1)
        p_out = _ring_arc_point(ring, w_idx, d0, +1)
        chord = p_out - p_in
        c_len = np.hypot(*chord)
        if c_len <= tol:
            d0 *= 0.5
            continue
        mid = 0.5 * (p_in + p_out)
        # outward normal of the CCW ring at this corner (right of travel direction)
        nrm = np.array([chord[1], -chord[0]]) / c_len
        apex = mid + nrm * (0.5 * c_len)
        seg_mid1 = 0.5 * (p_in + apex)
        seg_mid2 = 0.5 * (apex + p_out)
        probes = np.array([apex, seg_mid1, seg_mid2])
        if np.all(target.contains(probes, tol=0.0)) and \
                target.distance_to_boundary_many(probes).min() > 1e-9 * target.diameter:
            new_ring = _splice_corner(ring, w_idx, d0, p_in, apex, p_out)
            if new_ring is not None:
                return new_ring
        d0 *= 0.5
    return None


def _ring_arc_point(ring, start_idx, arc, direction):
    n = len(ring)
    i = start_idx
    remaining = float(arc)
    while True:
        j = (i + direction) % n
        step = float(np.hypot(*(ring[j] - ring[i])))
        if step >= remaining:
            return ring[i] + (ring[j] - ring[i]) * (remaining / step)
        remaining -= step
        i = j
        if i == start_idx:
            return ring[i].astype(float)


def _splice_corner(ring, w_idx, arc, p_in, apex, p_out):
    """Ring with the arc [w-arc, w+arc] replaced by p_in -> apex -> p_out."""
    n = len(ring)
    # vertices strictly inside the replaced arc (walk both directions from w)
    removed = {w_idx}
    for direction in (-1, +1):
        i = w_idx
        travelled = 0.0
        while True:
            j = (i + direction) % n
            travelled += float(np.hypot(*(ring[j] - ring[i])))
            if travelled >= arc - 1e-15:
                break
            removed.add(j)
            i = j
            if len(removed) >= n - 2:
                return None
    kept = [i for i in range(n) if i not in removed]
    # rebuild in ring order starting just after the removed block
    start = (w_idx + 1) % n
    while start in removed:
        start = (start + 1) % n
    ordered = []
    i = start
    for _ in range(n):
        if i not in removed:
            ordered.append(i)
        i = (i + 1) % n
    pts = [ring[i] for i in ordered]
    # ordered starts with the vertex after p_out and ends with the one before p_in
    out = np.vstack([[p_out], pts, [p_in], [apex]])
    return out


def inner_right_angle_approximation(
    target: PolygonalQuadrilateral, k: int
) -> PolygonalQuadrilateral:
    """Level-k inner polygon: inset by m_k with exact right angles at the quad-vertices."""
    m = _margin(target, k)
    tol = 1e-12 * target.diameter
    try:
        ring = _inset_ring(target, m)
    except InsetCollapse as exc:
        raise InsetCollapse(str(exc), feasible_level=_first_feasible_level(target, k)) from exc

    quad_pts = target.quad_vertex_points
    cur = ring
    for v in quad_pts:
        # quad-vertex of the level: boundary point of the offset closest to v
        segs = np.stack([cur, np.roll(cur, -1, axis=0)], axis=1)
        dist, feet, _ = points_to_segments(np.asarray(v, float), segs)
        e = int(dist[0].argmin())
        cur, w_idx = _insert_point_on_ring(cur, feet[0, e], tol)
        spliced = _right_corner(cur, w_idx, target, m, tol)
        if spliced is None:
            raise InsetCollapse(
                f"no admissible right corner near quad-vertex {tuple(v)} at margin {m}",
                feasible_level=_first_feasible_level(target, k),
            )
        cur = spliced  # the right-corner apex is the last vertex of the spliced ring

    quad_indices = []
    for v in quad_pts:
        d = np.hypot(*(cur - np.asarray(v, float)).T)
        quad_indices.append(int(d.argmin()))
    if len(set(quad_indices)) != 4:
        raise InsetCollapse(
            f"quad-vertex corners collide at margin {m}",
            feasible_level=_first_feasible_level(target, k),
        )
    return PolygonalQuadrilateral.build(cur, quad_indices)


def _first_feasible_level(target, k_failed, k_max=40):
    for k in range(k_failed + 1, k_max):
        try:
            _inset_ring(target, _margin(target, k))
            return k
        except InsetCollapse:
            continue
    return None


def build_approximation_sequence(
    target: PolygonalQuadrilateral, n_levels: int = 4, start_level: int = 1
) -> ApproximationSequence:
    seq = ApproximationSequence(target=target)
    for k in range(start_level, start_level + n_levels):
        seq.levels.append(inner_right_angle_approximation(target, k))
        seq.margins.append(_margin(target, k))
    return seq


def check_convergence_from_inside(seq: ApproximationSequence) -> dict:
    """Verify nesting and per-side Hausdorff decay; report the modulus gap per level.

    Raises NotNested / SideDistanceIncreased on violations.
    """
    if len(seq.levels) < 2:
        raise ValueError("need at least two levels")
    target = seq.target
    tau = target.tau_geom

    shapely_levels = [ShapelyPolygon(lv.vertices) for lv in seq.levels]
    shapely_target = ShapelyPolygon(target.vertices)
    chain = shapely_levels + [shapely_target]
    for k in range(len(chain) - 1):
        if not chain[k + 1].buffer(tau).covers(chain[k]):
            raise NotNested(f"level {k} is not contained in the next level")

    side_h = []
    for k in range(len(seq.levels)):
        side_h.append(seq.side_hausdorff(k))
    for lbl in SIDE_LABELS:
        for k in range(len(seq.levels) - 1):
            if side_h[k + 1][lbl] > side_h[k][lbl] + tau:
                raise SideDistanceIncreased(
                    f"side {lbl} Hausdorff distance grew from level {k} to {k + 1}"
                )

    cells = 128
    h_t = target.diameter / cells
    m_target = estimate_modulus(target, h_t).value
    moduli = [estimate_modulus(lv, lv.diameter / cells).value for lv in seq.levels]
    gaps = [abs(m - m_target) for m in moduli]
    return {
        "nested": True,
        "side_hausdorff": side_h,
        "modulus_levels": moduli,
        "modulus_target": m_target,
        "modulus_gaps": gaps,
    }


_TRIPLES = [
    frozenset({"A1", "A2", "B1"}),
    frozenset({"A1", "A2", "B2"}),
    frozenset({"B1", "B2", "A1"}),
    frozenset({"B1", "B2", "A2"}),
]


def limit_disk(seq: ApproximationSequence, disks: list[ContactDisk]) -> ContactDisk:
    """Validate the finest-level disk as a three-side disk of the target.

    All levels must report a common side triple (an opposite pair plus a
    third side); the finest disk's contacts must lie within
    tau_limit = 2 * (final per-side Hausdorff distance) of the corresponding
    target sides.
    """
    if len(disks) != len(seq.levels) or not disks:
        raise ValueError("one disk per level is required")
    common = [t for t in _TRIPLES if all(t <= d.label_set for d in disks)]
    if not common:
        raise LabelMismatch(
            f"no common side triple across levels: {[sorted(d.label_set) for d in disks]}"
        )
    triple = common[0]
    target = seq.target
    final_h = max(seq.side_hausdorff(len(seq.levels) - 1).values())
    tau_limit = 2.0 * final_h
    disk = disks[-1]
    center = np.asarray(disk.center, float)
    if not bool(target.contains(center[None], tol=target.tau_geom)[0]):
        raise LabelMismatch("limit disk center left the target polygon")
    if target.distance_to_boundary_many(center[None])[0] < disk.radius - tau_limit:
        raise LabelMismatch("limit disk is not inside the target at the limit tolerance")
    for lbl in sorted(triple):
        d = distance_point_to_polyline(center, target.side_polyline(lbl))
        if abs(d - disk.radius) > tau_limit:
            raise LabelMismatch(
                f"contact with side {lbl} misses the target side by {abs(d - disk.radius)}"
                f" > tau_limit {tau_limit}"
            )
    return disk
