import json

import numpy as np
import pytest

from tridisk.errors import BadQuadIndices, NotSimple, OutsidePolygon
from tridisk.geometry import (
    PolygonalQuadrilateral,
    conjugate,
    hausdorff_distance,
    validate,
)

from oracles import boundary_dist, dense_hausdorff, polyline_dist, sample_polyline

L_HEX = [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]


def test_validate_square_ok(square):
    validate(square)  # does not raise


def test_validate_bowtie_not_simple():
    with pytest.raises(NotSimple):
        PolygonalQuadrilateral.build([[0, 0], [1, 1], [1, 0], [0, 1]], [0, 1, 2, 3])


def test_validate_duplicate_quad_indices():
    with pytest.raises(BadQuadIndices):
        PolygonalQuadrilateral.build([[0, 0], [1, 0], [1, 1], [0, 1]], [0, 0, 1, 2])


def test_validate_quad_indices_out_of_cyclic_order():
    with pytest.raises(BadQuadIndices):
        PolygonalQuadrilateral.build(
            [[0, 0], [1, 0], [1, 1], [0.5, 1.2], [0, 1]], [0, 2, 1, 3]
        )


def test_clockwise_input_is_normalized():
    q = PolygonalQuadrilateral.build([[0, 0], [0, 1], [1, 1], [1, 0]], [0, 1, 2, 3])
    from tridisk.geometry import signed_area

    assert signed_area(q.vertices) > 0
    validate(q)


def test_collinear_vertices_are_merged():
    q = PolygonalQuadrilateral.build(
        [[0, 0], [0.5, 0], [1, 0], [1, 1], [0, 1]], [0, 2, 3, 4]
    )
    assert q.n == 4


def test_distance_to_boundary_square_center(square):
    assert square.distance_to_boundary([0.5, 0.5]) == pytest.approx(0.5, abs=1e-15)


def test_distance_to_boundary_square_offcenter(square):
    assert square.distance_to_boundary([0.25, 0.5]) == pytest.approx(0.25, abs=1e-15)


def test_distance_to_boundary_l_hex():
    q = PolygonalQuadrilateral.build(L_HEX, [0, 1, 2, 4])
    p = [0.6, 0.6]
    expected = boundary_dist(q, p)  # min of six point-segment distances
    assert expected == pytest.approx(np.sqrt(0.32), abs=1e-12)
    assert q.distance_to_boundary(p) == pytest.approx(expected, abs=1e-12)


def test_distance_outside_raises(square):
    with pytest.raises(OutsidePolygon):
        square.distance_to_boundary([2.0, 0.5])


def test_nearest_features_square_center(square):
    feats = square.nearest_boundary_features([0.5, 0.5], tol=1e-9)
    assert len(feats) == 4
    assert all(f.kind == "edge" for f, _ in feats)


def test_nearest_features_square_offcenter(square):
    feats = square.nearest_boundary_features([0.25, 0.5], tol=1e-9)
    assert len(feats) == 1
    foot = feats[0][1]
    assert foot == pytest.approx((0.0, 0.5), abs=1e-12)


def test_nearest_features_rect_three_way(rect_2x1):
    feats = rect_2x1.nearest_boundary_features([0.5, 0.5], tol=1e-9)
    assert len(feats) == 3


def test_hausdorff_identical():
    poly = np.array([[0, 0], [1, 0], [1.5, 0.5]])
    assert hausdorff_distance(poly, poly) == pytest.approx(0.0, abs=1e-12)


def test_hausdorff_parallel_offset():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    b = np.array([[0.0, 0.1], [1.0, 0.1]])
    assert hausdorff_distance(a, b) == pytest.approx(0.1, abs=1e-12)


def test_hausdorff_arc_versus_subsample():
    theta = np.linspace(0.0, np.pi, 257)
    arc = np.column_stack([np.cos(theta), np.sin(theta)])
    sub = arc[:: 32]
    got = hausdorff_distance(arc, sub)
    ref = dense_hausdorff(arc, sub, k=4096)
    assert got == pytest.approx(ref, abs=2e-3)
    assert got > 0


def test_hausdorff_symmetry_and_triangle():
    rng = np.random.default_rng(3)
    for _ in range(20):
        polys = [rng.uniform(-1, 1, (rng.integers(2, 6), 2)) for _ in range(3)]
        a, b, c = polys
        dab = hausdorff_distance(a, b)
        dba = hausdorff_distance(b, a)
        assert dab == pytest.approx(dba, abs=1e-12)
        dbc = hausdorff_distance(b, c)
        dac = hausdorff_distance(a, c)
        assert dac <= dab + dbc + 1e-9


def test_distance_is_lipschitz(square, l_hex):
    rng = np.random.default_rng(11)
    for q in (square, l_hex):
        pts = []
        while len(pts) < 40:
            p = rng.uniform(q.bbox[0], q.bbox[2]), rng.uniform(q.bbox[1], q.bbox[3])
            if q.contains(np.array([p]), tol=0)[0]:
                pts.append(np.array(p))
        for i in range(len(pts) - 1):
            d1 = q.distance_to_boundary(pts[i])
            d2 = q.distance_to_boundary(pts[i + 1])
            assert abs(d1 - d2) <= np.hypot(*(pts[i] - pts[i + 1])) + 1e-12


def test_empty_disk_property(l_hex):
    # the open clearance disk contains no boundary point
    rng = np.random.default_rng(5)
    q = l_hex
    boundary = sample_polyline(np.vstack([q.vertices, q.vertices[:1]]), 2000)
    count = 0
    while count < 30:
        p = np.array([rng.uniform(0, 2), rng.uniform(0, 2)])
        if not q.contains(p[None], tol=0)[0]:
            continue
        r = q.distance_to_boundary(p)
        d = np.hypot(*(boundary - p).T)
        assert d.min() >= r - 1e-9
        count += 1


def test_json_round_trip(tmp_path, rect_2x1):
    path = tmp_path / "q.json"
    rect_2x1.save(path)
    q2 = PolygonalQuadrilateral.from_file(path)
    assert np.allclose(q2.vertices, rect_2x1.vertices)
    assert q2.quad_indices == rect_2x1.quad_indices
    raw = json.loads(path.read_text())
    assert set(raw) <= {"vertices", "quad_vertices", "sampled"}


def test_side_polylines_partition_boundary(l_hex):
    q = l_hex
    total = sum(len(q.side_polyline(lbl)) - 1 for lbl in ("A1", "B1", "A2", "B2"))
    assert total == q.n


def test_conjugate_swaps_side_roles(rect_2x1):
    c = conjugate(rect_2x1)
    assert np.allclose(c.side_polyline("A1"), rect_2x1.side_polyline("B1"))
    assert np.allclose(c.side_polyline("B2"), rect_2x1.side_polyline("A1"))
