import json
from collections import Counter

import numpy as np
import pytest

from mobius_center import generators as gen
from mobius_center import polytope as pt
from mobius_center.errors import DegenerateTriangulation, FormatError, InvalidSimilarity, ZeroVolume

SQUARE = gen.unit_square()
TRIANGLE = gen.standard_triangle()


def shoelace(points):
    x, y = np.asarray(points, dtype=float).T
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def flux_volume(p):
    """Divergence theorem with F = (x, 0, 0): vol = sum over facets of x-centroid times area-normal x-component."""
    total = 0.0
    for f in p.facets:
        a, b, c = p.vertices[list(f.indices)]
        normal = 0.5 * np.cross(b - a, c - a)
        total += f.weight * normal[0] * (a[0] + b[0] + c[0]) / 3.0
    return total


def test_triangle_boundary_is_cycle():
    assert pt.validate_cycle(TRIANGLE) == []


def test_reversed_edge_gives_two_violations():
    p = pt.SimplicialPolytope(2, TRIANGLE.vertices, [(0, 1), (1, 2), (0, 2)])
    violations = pt.validate_cycle(p)
    assert sorted((v.face, v.multiplicity) for v in violations) == [((0,), -2), ((2,), 2)]
    assert "net multiplicity" in str(violations[0])


def test_tetrahedron_directed_edges_cancel():
    faces = [(1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)]
    directed = Counter((f[i], f[(i + 1) % 3]) for f in faces for i in range(3))
    assert len(directed) == 12 and all(directed[(b, a)] == c for (a, b), c in directed.items())
    p = pt.SimplicialPolytope(3, np.vstack([np.zeros(3), np.eye(3)]), faces)
    assert pt.validate_cycle(p) == []
    assert pt.volume(p) == pytest.approx(1 / 6)


def test_generators_are_cycles(corpus):
    for name, p in corpus.items():
        assert pt.validate_cycle(p) == [], name


def test_corrupted_chains_fail(corpus):
    for name, p in corpus.items():
        facets = list(p.facets)
        f = facets[0]
        facets[0] = pt.Facet((f.indices[1], f.indices[0]) + f.indices[2:], f.weight)
        assert pt.validate_cycle(pt.SimplicialPolytope(p.dim, p.vertices, facets)), name
        assert pt.validate_cycle(pt.SimplicialPolytope(p.dim, p.vertices, p.facets[1:])), name


@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_crosspolytope_facet_count(dim):
    p = gen.crosspolytope(dim)
    assert len(p.facets) == 2**dim
    assert pt.validate_cycle(p) == []


def test_square_cone_from_corner_is_degenerate():
    tri = pt.cone_triangulation(SQUARE, [0.0, 0.0], allow_degenerate=True)
    assert len(tri.simplices) == 4 and len(tri.degenerate) == 2
    with pytest.raises(DegenerateTriangulation) as info:
        pt.cone_triangulation(SQUARE, [0.0, 0.0])
    assert len(info.value.indices) == 2


def test_square_cone_interior_apex_matches_shoelace():
    apex = np.array([0.3, 0.4])
    tri = pt.cone_triangulation(SQUARE, apex)
    assert tri.degenerate == ()
    areas = [w * pt.sx.signed_volume(s) for s, w in tri.simplices]
    expected = [shoelace(np.vstack([apex, SQUARE.vertices[list(f.indices)]])) for f in SQUARE.facets]
    np.testing.assert_allclose(areas, expected, rtol=1e-14)
    assert sum(areas) == pytest.approx(1.0)


def test_triangle_cone_from_vertex_fails_and_centroid_splits_evenly():
    with pytest.raises(DegenerateTriangulation):
        pt.cone_triangulation(TRIANGLE, TRIANGLE.vertices[0])
    tri = pt.cone_triangulation(TRIANGLE, TRIANGLE.vertices.mean(axis=0))
    for s, w in tri.simplices:
        assert w * pt.sx.signed_volume(s) == pytest.approx(0.5 / 3)


def test_volume_examples():
    for apex in ([0.5, 0.5], [3.0, -2.0], [0.0, 0.0]):
        assert pt.volume(SQUARE, apex) == pytest.approx(1.0)
    assert pt.volume(-SQUARE) == pytest.approx(-1.0)
    cube = gen.unit_cube()
    assert flux_volume(cube) == pytest.approx(1.0)
    assert pt.volume(cube) == pytest.approx(1.0)
    assert pt.volume(cube, [5.0, -1.0, 2.0]) == pytest.approx(1.0)


def test_volume_apex_independent(corpus, rng):
    for p in corpus.values():
        v0 = pt.volume(p)
        for _ in range(3):
            assert pt.volume(p, rng.normal(size=p.dim) * 3) == pytest.approx(v0, rel=1e-10)


def test_polygon_volume_matches_shoelace(rng):
    for _ in range(20):
        p = gen.random_star_polygon(rng)
        assert pt.volume(p) == pytest.approx(shoelace(p.vertices), rel=1e-12)


def test_square_centers():
    r = pt.centers(SQUARE)
    for c in (r.cm, r.ccm, r.m):
        np.testing.assert_allclose(c, [0.5, 0.5], atol=1e-15)
    assert r.residual_euler <= 1e-12


def test_triangle_centers():
    np.testing.assert_allclose(pt.circumcenter_of_mass(TRIANGLE), [0.5, 0.5], atol=1e-15)
    # nine-point center: midpoint of circumcenter (0.5, 0.5) and orthocenter (0, 0)
    np.testing.assert_allclose(pt.mobius_center(TRIANGLE), [0.25, 0.25], atol=1e-15)
    np.testing.assert_allclose(pt.center_of_mass(TRIANGLE), [1 / 3, 1 / 3], atol=1e-15)


def test_polygon_center_of_mass_matches_area_formula(rng):
    for _ in range(10):
        p = gen.random_star_polygon(rng)
        x, y = p.vertices.T
        x1, y1 = np.roll(x, -1), np.roll(y, -1)
        cross = x * y1 - x1 * y
        area = cross.sum() / 2
        expected = np.array([((x + x1) * cross).sum(), ((y + y1) * cross).sum()]) / (6 * area)
        np.testing.assert_allclose(pt.center_of_mass(p), expected, atol=1e-12)


def test_hexagon_cross_route():
    p = gen.random_convex_polygon(np.random.default_rng(6), k=6)
    r = pt.centers(p)
    assert r.residual_euler <= 1e-9 * (1 + pt.diameter(p))


def test_perturbed_octahedron_cross_route():
    p = gen.crosspolytope(3, np.random.default_rng(8), 0.3)
    r = pt.centers(p)
    assert r.residual_euler <= 1e-8 * (1 + pt.diameter(p))


def test_triangulation_independence(corpus, rng):
    for name, p in corpus.items():
        base = pt.centers(p)
        tol = 1e-8 * (1 + pt.diameter(p))
        for _ in range(2):
            apex = p.vertices.min(axis=0) + rng.random(p.dim) * np.ptp(p.vertices, axis=0)
            other = pt.centers(p, apex)
            for key in ("cm", "ccm", "m"):
                np.testing.assert_allclose(getattr(other, key), getattr(base, key), atol=tol, err_msg=name)


def test_default_apex_retry():
    # the pool mean sits on the diagonal of this kite, which is a facet line of the chain
    pts = [(0, 0), (2, 0), (2, 2), (0, 2)]
    p = pt.SimplicialPolytope(2, pts, [(0, 1), (1, 2), (2, 0), (0, 2), (2, 3), (3, 0)])
    with pytest.raises(DegenerateTriangulation):
        pt.cone_triangulation(p)
    np.testing.assert_allclose(pt.center_of_mass(p), [1.0, 1.0], atol=1e-14)


def test_additivity(rng):
    p = gen.crosspolytope(3, rng, 0.2)
    q = gen.crosspolytope(3, rng, 0.2)
    pool = np.vstack([p.vertices, q.vertices + 0.3])
    k = len(p.vertices)
    pp = pt.SimplicialPolytope(3, pool, p.facets)
    qq = pt.SimplicialPolytope(3, pool, [pt.Facet(tuple(i + k for i in f.indices), f.weight) for f in q.facets])
    vp, vq = pt.volume(pp), pt.volume(qq)
    assert pt.volume(pp + qq) == pytest.approx(vp + vq, rel=1e-12)
    expected = (vp * pt.mobius_center(pp) + vq * pt.mobius_center(qq)) / (vp + vq)
    np.testing.assert_allclose(pt.mobius_center(pp + qq), expected, atol=1e-10)
    diff = pp - qq
    assert pt.volume(diff) == pytest.approx(vp - vq, rel=1e-12)
    with pytest.raises(ValueError):
        p + q


def test_zero_volume():
    with pytest.raises(ZeroVolume):
        pt.centers(SQUARE - SQUARE)
    # figure-eight: two triangles with opposite orientation and equal area
    p = pt.SimplicialPolytope(2, [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 0), (0, 4), (4, 3), (3, 0)])
    assert pt.validate_cycle(p) == []
    with pytest.raises(ZeroVolume):
        pt.mobius_center(p)


def test_weights_equal_duplicated_facets():
    doubled = pt.SimplicialPolytope(2, SQUARE.vertices, [pt.Facet(f.indices, 2) for f in SQUARE.facets])
    assert pt.volume(doubled) == pytest.approx(2.0)
    np.testing.assert_allclose(pt.mobius_center(doubled), [0.5, 0.5])


def test_apply_similarity():
    same = pt.apply_similarity(SQUARE, np.eye(2), 1.0, np.zeros(2))
    np.testing.assert_array_equal(same.vertices, SQUARE.vertices)
    assert pt.volume(pt.apply_similarity(SQUARE, np.eye(2), 2.0, np.zeros(2))) == pytest.approx(4.0)
    with pytest.raises(InvalidSimilarity):
        pt.apply_similarity(SQUARE, [[1, 0.1], [0, 1]], 1.0, np.zeros(2))
    with pytest.raises(InvalidSimilarity):
        pt.apply_similarity(SQUARE, np.eye(2), 0.0, np.zeros(2))


def test_similarity_equivariance(corpus, rng):
    for name, p in corpus.items():
        m = pt.mobius_center(p)
        for _ in range(5):
            rot, k, t = gen.random_similarity(rng, p.dim)
            mapped = pt.apply_similarity(p, rot, k, t)
            np.testing.assert_allclose(pt.mobius_center(mapped), k * rot @ m + t, atol=1e-8 * (1 + pt.diameter(mapped)), err_msg=name)


def test_json_round_trip(tmp_path, corpus):
    for name, p in corpus.items():
        path = tmp_path / f"{name}.json"
        pt.save_polytope(p, path)
        q = pt.load_polytope(path)
        np.testing.assert_array_equal(q.vertices, p.vertices)
        assert q.facets == p.facets


def test_json_weight_defaults_to_one():
    p = pt.from_dict({"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1]], "facets": [{"indices": [0, 1]}, {"indices": [1, 2]}, {"indices": [2, 0]}]})
    assert all(f.weight == 1 for f in p.facets)
    assert set(pt.to_dict(p)) == {"dim", "vertices", "facets"}
    assert set(pt.to_dict(p)["facets"][0]) == {"indices", "weight"}


@pytest.mark.parametrize(
    "data",
    [
        {"vertices": [[0, 0]], "facets": []},
        {"dim": 2, "vertices": [[0, 0], [1]], "facets": []},
        {"dim": 2, "vertices": [[0, 0], [1, 0]], "facets": [{"indices": [0, 5]}]},
        {"dim": 2, "vertices": [[0, 0], [1, 0]], "facets": [{"indices": [0, 1], "weight": 0}]},
        {"dim": 2, "vertices": [[0, 0], [1, 0]], "facets": [{"indices": [0, 1], "weight": 1.5}]},
        {"dim": 2, "vertices": [[0, 0], [1, 0]], "facets": [{"indices": [0, 0]}]},
        {"dim": 2, "vertices": [["a", 0]], "facets": []},
    ],
)
def test_json_rejects_malformed(data):
    with pytest.raises(FormatError):
        pt.from_dict(data)


def test_load_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(FormatError):
        pt.load_polytope(path)
    path.write_text(json.dumps([1, 2]))
    with pytest.raises(FormatError):
        pt.load_polytope(path)
