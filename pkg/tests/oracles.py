"""Independent brute-force oracles used only by the test suite.

These deliberately avoid the library's algorithmic code paths; they only
consume the quadrilateral data model (vertices, side polylines, containment).
"""
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra


def seg_dist(p, a, b):
    p = np.asarray(p, float)
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    d = b - a
    denom = float(d @ d)
    t = 0.0 if denom == 0 else float((p - a) @ d) / denom
    t = min(max(t, 0.0), 1.0)
    return float(np.hypot(*(a + t * d - p)))


def polyline_dist(p, poly):
    poly = np.asarray(poly, float)
    if len(poly) == 1:
        return float(np.hypot(*(poly[0] - np.asarray(p, float))))
    return min(seg_dist(p, poly[i], poly[i + 1]) for i in range(len(poly) - 1))


def boundary_dist(q, p):
    verts = q.vertices
    n = len(verts)
    return min(seg_dist(p, verts[i], verts[(i + 1) % n]) for i in range(n))


def sample_polyline(poly, k):
    poly = np.asarray(poly, float)
    seg = np.diff(poly, axis=0)
    cum = np.concatenate([[0.0], np.cumsum(np.hypot(seg[:, 0], seg[:, 1]))])
    s = np.linspace(0.0, cum[-1], k)
    return np.column_stack([np.interp(s, cum, poly[:, 0]), np.interp(s, cum, poly[:, 1])])


def dense_hausdorff(a, b, k=4096):
    """Brute-force max-min over dense samples of both polylines."""
    pa = sample_polyline(a, k)
    pb = sample_polyline(b, k)
    d = np.sqrt(((pa[:, None, :] - pb[None, :, :]) ** 2).sum(-1))
    return max(float(d.min(axis=1).max()), float(d.min(axis=0).max()))


def disk_side_labels(q, center, radius, tol):
    """Side labels touched by the disk, by direct per-side polyline distance."""
    labels = set()
    for lbl in ("A1", "B1", "A2", "B2"):
        if abs(polyline_dist(center, q.side_polyline(lbl)) - radius) <= tol:
            labels.add(lbl)
    return labels


def clearance_ridge_points(q, grid_n=256):
    """Grid approximation of the medial axis: equidistance plus directional ridge.

    Returns (points, spacing): interior grid points whose clearance is
    attained by >= 2 boundary features within 2*spacing and that are local
    clearance maxima along at least one grid direction.
    """
    x0, y0, x1, y1 = q.bbox
    spacing = max(x1 - x0, y1 - y0) / grid_n
    xs = x0 + (np.arange(grid_n) + 0.5) * (x1 - x0) / grid_n
    ys = y0 + (np.arange(grid_n) + 0.5) * (y1 - y0) / grid_n
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    inside = q.contains(pts, tol=0.0)

    verts = q.vertices
    n = len(verts)
    reflex = list(q.reflex_vertices)
    feature_d = []
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        d = b - a
        denom = float(d @ d)
        t = ((pts - a) @ d) / denom
        foot = a + t[:, None] * d
        dist = np.hypot(*(pts - foot).T)
        dist[(t < 0.0) | (t > 1.0)] = np.inf  # slab-restricted edge distance
        feature_d.append(dist)
    for v in reflex:
        feature_d.append(np.hypot(*(pts - verts[v]).T))
    D = np.column_stack(feature_d)
    D.sort(axis=1)
    gap_ok = (D[:, 1] - D[:, 0]) <= 2.0 * spacing

    clear = D[:, 0].reshape(grid_n, grid_n)
    field = np.where(inside.reshape(grid_n, grid_n), clear, -np.inf)
    ridge = np.zeros((grid_n, grid_n), dtype=bool)
    for dx, dy in ((1, 0), (0, 1), (1, 1), (1, -1)):
        lo = np.full_like(field, -np.inf)
        hi = np.full_like(field, -np.inf)
        sl_src = (slice(max(dx, 0), grid_n + min(dx, 0) or None),
                  slice(max(dy, 0), grid_n + min(dy, 0) or None))
        sl_dst = (slice(max(-dx, 0), grid_n + min(-dx, 0) or None),
                  slice(max(-dy, 0), grid_n + min(-dy, 0) or None))
        lo[sl_dst] = field[sl_src]
        hi[sl_src] = field[sl_dst]
        ridge |= (field >= lo) & (field >= hi) & np.isfinite(field)
    mask = inside & gap_ok & ridge.ravel()
    return pts[mask], spacing


def dijkstra_geodesic(q, pair, k=512):
    """Dense-sampling Dijkstra geodesic between the opposite sides of a pair."""
    la, lb = ("A1", "A2") if pair == "a" else ("B1", "B2")
    sa = sample_polyline(q.side_polyline(la), k)
    sb = sample_polyline(q.side_polyline(lb), k)
    pts = np.vstack([q.vertices, sa, sb])
    nv = len(q.vertices)
    src = np.arange(nv, nv + k)
    dst = np.arange(nv + k, nv + 2 * k)

    edges = q.edges
    c, d = edges[:, 0], edges[:, 1]
    m = len(pts)
    iu, ju = np.triu_indices(m, k=1)
    ok = np.ones(len(iu), dtype=bool)
    eps = 1e-12 * q.diameter ** 2
    chunk = 40000
    for s in range(0, len(iu), chunk):
        sl = slice(s, min(s + chunk, len(iu)))
        p = pts[iu[sl]]
        r = pts[ju[sl]]
        d1 = (d[None, :, 0] - c[None, :, 0]) * (p[:, None, 1] - c[None, :, 1]) - \
             (d[None, :, 1] - c[None, :, 1]) * (p[:, None, 0] - c[None, :, 0])
        d2 = (d[None, :, 0] - c[None, :, 0]) * (r[:, None, 1] - c[None, :, 1]) - \
             (d[None, :, 1] - c[None, :, 1]) * (r[:, None, 0] - c[None, :, 0])
        d3 = (r[:, None, 0] - p[:, None, 0]) * (c[None, :, 1] - p[:, None, 1]) - \
             (r[:, None, 1] - p[:, None, 1]) * (c[None, :, 0] - p[:, None, 0])
        d4 = (r[:, None, 0] - p[:, None, 0]) * (d[None, :, 1] - p[:, None, 1]) - \
             (r[:, None, 1] - p[:, None, 1]) * (d[None, :, 0] - p[:, None, 0])
        crossing = (((d1 > eps) & (d2 < -eps)) | ((d1 < -eps) & (d2 > eps))) & \
                   (((d3 > eps) & (d4 < -eps)) | ((d3 < -eps) & (d4 > eps)))
        ok[sl] &= ~crossing.any(axis=1)
        # several interior probes must stay inside the closed polygon
        for t in (0.21, 0.5, 0.79):
            probes = p + t * (r - p)
            ok[sl] &= q.contains(probes)
    iu, ju = iu[ok], ju[ok]
    w = np.hypot(*(pts[iu] - pts[ju]).T)
    graph = csr_matrix(
        (np.concatenate([w, w]), (np.concatenate([iu, ju]), np.concatenate([ju, iu]))),
        shape=(m, m),
    )
    dist = dijkstra(graph, directed=False, indices=src, min_only=True)
    return float(dist[dst].min())
