import numpy as np
import pytest
from scipy.spatial import cKDTree

from tridisk.errors import Disconnected
from tridisk.geometry import BoundaryFeature, PolygonalQuadrilateral
from tridisk.medial_axis import compute_medial_axis, maximal_disk, tree_path

from conftest import MA_CORPUS_NAMES, load
from oracles import clearance_ridge_points, polyline_dist


def _node_at(graph, xy, tol=1e-6):
    n = graph.node_near(np.asarray(xy, float), tol)
    assert n is not None, f"no node near {xy}"
    return n


def test_square_structure(square):
    g = compute_medial_axis(square)
    assert g.node_count == 5 and g.edge_count == 4
    assert g.is_tree()
    center = _node_at(g, (0.5, 0.5))
    assert center.clearance == pytest.approx(0.5, abs=1e-9)
    assert center.degree == 4
    tips = g.tips()
    assert len(tips) == 4
    assert all(t.clearance <= 1e-9 for t in tips)
    assert all(e.kind == "segment" for e in g.edges)


def test_rect_structure(rect_2x1):
    g = compute_medial_axis(rect_2x1)
    assert g.node_count == 6 and g.edge_count == 5
    assert g.is_tree()
    for xy in ((0.5, 0.5), (1.5, 0.5)):
        n = _node_at(g, xy)
        assert n.degree == 3
        assert n.clearance == pytest.approx(0.5, abs=1e-9)
    # the spine keeps clearance 0.5 along its whole length
    spine = [e for e in g.edges
             if {tuple(np.round(e.points(np.array([0.0]))[0], 6)),
                 tuple(np.round(e.points(np.array([1.0]))[0], 6))}
             == {(0.5, 0.5), (1.5, 0.5)}]
    assert len(spine) == 1
    clear = spine[0].clearances(np.linspace(0, 1, 33))
    assert np.allclose(clear, 0.5, atol=1e-9)


def test_l_hex_has_parabola(l_hex):
    g = compute_medial_axis(l_hex)
    assert g.is_tree()
    parabolas = [e for e in g.edges if e.kind == "parabola"]
    assert parabolas
    reflex = BoundaryFeature("reflex_vertex", 3)
    assert any(reflex in e.feature_pair for e in parabolas)


def test_convex_polygons_have_no_parabolas():
    for name in ("convex5", "convex6", "convex7", "convex8"):
        g = compute_medial_axis(load(name))
        assert g.is_tree()
        assert all(e.kind == "segment" for e in g.edges), name


def test_equidistance_residuals():
    for name in MA_CORPUS_NAMES:
        q = load(name)
        g = compute_medial_axis(q)
        tau = q.tau_geom
        for e in g.edges:
            ts = np.linspace(0.0, 1.0, 100)
            pts = e.points(ts)
            d_pair = e.clearances(ts)
            clear = q.distance_to_boundary_many(pts)
            # the pair distance equals the clearance: nothing else is closer
            assert np.all(d_pair - clear <= tau), name
            assert np.all(clear - d_pair <= tau), name


def test_tree_invariant_on_corpus():
    for name in MA_CORPUS_NAMES:
        g = compute_medial_axis(load(name))
        assert g.node_count - g.edge_count == 1, name
        assert g.is_connected(), name


def test_clearance_lipschitz_along_path(rect_2x1):
    g = compute_medial_axis(rect_2x1)
    a = _node_at(g, (0.0, 0.0))
    b = _node_at(g, (2.0, 1.0))
    path = tree_path(g, a, b)
    s = np.linspace(0.0, 1.0, 400)
    pts = path.points(s)
    clear = path.clearances(s)
    steps = np.hypot(*np.diff(pts, axis=0).T)
    assert np.all(np.abs(np.diff(clear)) <= steps + 1e-9)


def test_tree_path_square(square):
    g = compute_medial_axis(square)
    a = _node_at(g, (0.0, 0.0))
    b = _node_at(g, (1.0, 1.0))
    path = tree_path(g, a, b)
    assert path.n_edges == 2
    assert np.allclose(path.point(0.0), (0, 0), atol=1e-7)
    assert np.allclose(path.point(1.0), (1, 1), atol=1e-7)
    assert np.allclose(path.point(0.5), (0.5, 0.5), atol=1e-6)


def test_tree_path_rect_three_edges(rect_2x1):
    g = compute_medial_axis(rect_2x1)
    a = _node_at(g, (0.0, 0.0))
    b = _node_at(g, (2.0, 1.0))
    assert tree_path(g, a, b).n_edges == 3


def test_tree_path_equal_endpoints_rejected(square):
    g = compute_medial_axis(square)
    a = _node_at(g, (0.0, 0.0))
    with pytest.raises(ValueError):
        tree_path(g, a, a)


def test_oracle_equivalence_quick(l_hex):
    q = l_hex
    g = compute_medial_axis(q)
    oracle_pts, spacing = clearance_ridge_points(q, grid_n=128)
    tol = q.tau_ma + 2.0 * spacing
    samples = g.sample_all(per_edge=256)
    tree = cKDTree(samples)
    d_o, _ = tree.query(oracle_pts)
    assert d_o.max() <= tol
    tree_o = cKDTree(oracle_pts)
    d_g, _ = tree_o.query(samples)
    assert d_g.max() <= tol


def test_maximal_disk_square_center(square):
    d = maximal_disk(square, [0.5, 0.5])
    assert d.radius == pytest.approx(0.5, abs=1e-12)
    assert len(d.contacts) == 4
    assert d.label_set == {"A1", "B1", "A2", "B2"}


def test_maximal_disk_rect(rect_2x1):
    d = maximal_disk(rect_2x1, [0.5, 0.5])
    assert d.radius == pytest.approx(0.5, abs=1e-12)
    assert d.label_set == {"A1", "A2", "B2"}


def test_maximal_disk_on_ma_matches_feature_pair(l_hex):
    q = l_hex
    g = compute_medial_axis(q)
    for e in g.edges:
        mid = e.points(np.array([0.5]))[0]
        disk = maximal_disk(q, mid)
        # every pair feature appears among the nearest features of the disk center
        feats = {f for f, _ in q.nearest_boundary_features(mid, q.tau_contact)}
        for f in e.feature_pair:
            assert f in feats


def test_graph_json_export(rect_2x1):
    g = compute_medial_axis(rect_2x1)
    data = g.to_json_dict()
    assert len(data["nodes"]) == g.node_count
    assert len(data["edges"]) == g.edge_count
    for e in data["edges"]:
        assert e["type"] in ("segment", "parabola")
        assert len(e["node_ids"]) == 2
        assert len(e["polyline"]) == 64
