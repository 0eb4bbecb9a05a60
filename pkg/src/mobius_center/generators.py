"""Fixed test shapes and seeded random generators for polytopes, simplices,
fields and similarities. All random functions take a ``numpy.random.Generator``.
"""

from itertools import product

import numpy as np

from . import simplex as sx
from .fields import QuadraticField
from .polytope import Facet, SimplicialPolytope, diameter


def simplex_boundary(vertices):
    """Boundary of an oriented simplex: facet k omits vertex k, with weight (-1)^k."""
    v = np.asarray(vertices, dtype=float)
    n = v.shape[1]
    idx = tuple(range(n + 1))
    facets = tuple(Facet(idx[:k] + idx[k + 1:], (-1) ** k) for k in range(n + 1))
    return SimplicialPolytope(n, v, facets)


def polygon(points):
    """Closed polygon boundary through ``points`` in order (counterclockwise is positive)."""
    pts = np.asarray(points, dtype=float)
    k = len(pts)
    return SimplicialPolytope(2, pts, tuple(Facet((i, (i + 1) % k)) for i in range(k)))


def unit_square():
    return polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def standard_triangle():
    return polygon([(0, 0), (1, 0), (0, 1)])


def unit_cube():
    """Boundary of [0, 1]^3 as 12 outward-oriented triangles; vertex index is x + 2y + 4z."""
    verts = [(i & 1, (i >> 1) & 1, (i >> 2) & 1) for i in range(8)]
    quads = [(0, 2, 3, 1), (4, 5, 7, 6), (0, 1, 5, 4), (2, 6, 7, 3), (0, 4, 6, 2), (1, 3, 7, 5)]
    facets = []
    for a, b, c, d in quads:
        facets += [Facet((a, b, c)), Facet((a, c, d))]
    return SimplicialPolytope(3, verts, tuple(facets))


def crosspolytope(dim, rng=None, perturbation=0.0):
    """Boundary of the cross-polytope with vertices ``±e_i``, 2^dim facets.

    Vertex ``2i`` is ``+e_i`` and ``2i + 1`` is ``-e_i``. Each facet picks one
    vertex per axis and is ordered so that its cone over the origin is
    positively oriented. With ``perturbation > 0`` every coordinate gets uniform
    noise in ``[-perturbation, perturbation]``; the chain stays a cycle.
    """
    if dim < 2:
        raise ValueError(f"cross-polytope needs dim >= 2, got {dim}")
    verts = np.zeros((2 * dim, dim))
    for i in range(dim):
        verts[2 * i, i] = 1.0
        verts[2 * i + 1, i] = -1.0
    if perturbation:
        verts += rng.uniform(-perturbation, perturbation, size=verts.shape)
    facets = []
    for signs in product((1, -1), repeat=dim):
        idx = [2 * i + (s < 0) for i, s in enumerate(signs)]
        if np.prod(signs) < 0:
            idx[0], idx[1] = idx[1], idx[0]
        facets.append(Facet(tuple(idx)))
    return SimplicialPolytope(dim, verts, tuple(facets))


def random_convex_polygon(rng, k=None):
    """Points at sorted random angles on a random ellipse, counterclockwise."""
    k = int(rng.integers(3, 10)) if k is None else k
    angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=k))
    pts = np.column_stack([np.cos(angles), np.sin(angles)])
    shape = np.diag(rng.uniform(0.5, 2.0, size=2))
    rot = random_rotation(rng, 2, proper=True)
    return polygon(pts @ (rot @ shape).T + rng.uniform(-1.0, 1.0, size=2))


def random_star_polygon(rng, k=None):
    """Star-shaped, usually non-convex polygon: sorted angles with random radii."""
    k = int(rng.integers(5, 12)) if k is None else k
    angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=k))
    radii = rng.uniform(0.3, 1.5, size=k)
    return polygon(radii[:, None] * np.column_stack([np.cos(angles), np.sin(angles)]))


def random_crosspolytope(rng, dim, perturbation=0.3):
    return crosspolytope(dim, rng, perturbation)


def random_simplex(rng, dim, max_condition=1e3):
    """Gaussian vertices, rejecting simplices whose edge matrix is badly conditioned."""
    while True:
        v = rng.normal(size=(dim + 1, dim))
        if np.linalg.cond(v[1:] - v[0]) <= max_condition:
            return sx.Simplex(v)


def random_rotation(rng, dim, proper=False):
    """Haar-random orthogonal matrix; ``proper`` forces determinant +1."""
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q * np.sign(np.diag(r))
    if proper and np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_similarity(rng, dim):
    """``(rotation, scale, translation)`` with possibly improper rotation and scale in [0.2, 5]."""
    scale = float(np.exp(rng.uniform(np.log(0.2), np.log(5.0))))
    return random_rotation(rng, dim), scale, rng.uniform(-3.0, 3.0, size=dim)


def random_skew(rng, dim):
    upper = np.triu(rng.uniform(-1.0, 1.0, size=(dim, dim)), 1)
    return upper - upper.T


def random_field(rng, dim, kind="mobius", polytope=None):
    """Random quadratic field with entries uniform in [-1, 1].

    Möbius fields get ``A = skew + lambda I``; other kinds get an unconstrained
    ``A``. When ``polytope`` is given, ``b`` is divided by ``1 + diameter`` to
    push finite-time blow-up further out.
    """
    if kind == "mobius":
        A = random_skew(rng, dim) + rng.uniform(-1.0, 1.0) * np.eye(dim)
    else:
        A = rng.uniform(-1.0, 1.0, size=(dim, dim))
    b = rng.uniform(-1.0, 1.0, size=dim)
    c = rng.uniform(-1.0, 1.0, size=dim)
    if polytope is not None:
        b = b / (1.0 + diameter(polytope))
    return QuadraticField(kind, A, b, c)


def random_isometry_field(rng, dim, rotation=True, translation=True):
    """Infinitesimal isometry: skew A, b = 0, optional translation c."""
    A = random_skew(rng, dim) if rotation else np.zeros((dim, dim))
    c = rng.uniform(-1.0, 1.0, size=dim) if translation else np.zeros(dim)
    return QuadraticField("mobius", A, np.zeros(dim), c)


def random_polytope(rng, dim):
    """One polytope from the generator corpus for ``dim``."""
    if dim == 2:
        choice = rng.integers(3)
        if choice == 0:
            return random_convex_polygon(rng)
        if choice == 1:
            return random_star_polygon(rng)
    return random_crosspolytope(rng, dim)


def corpus(dims=(2, 3, 4, 5), seed=0, per_dim=5):
    """Named fixed shapes plus seeded random ones for each dimension."""
    rng = np.random.default_rng(seed)
    shapes = {
        "square": unit_square(),
        "triangle": standard_triangle(),
        "cube": unit_cube(),
        "tetrahedron": simplex_boundary(np.vstack([np.zeros(3), np.eye(3)])),
        "octahedron": crosspolytope(3),
    }
    out = {name: p for name, p in shapes.items() if p.dim in dims}
    for n in dims:
        if n == 2:
            for i in range(per_dim):
                out[f"convex-polygon-{i}"] = random_convex_polygon(rng)
                out[f"star-polygon-{i}"] = random_star_polygon(rng)
        for i in range(per_dim):
            out[f"crosspoly-{n}d-{i}"] = random_crosspolytope(rng, n)
        out[f"simplex-{n}d"] = simplex_boundary(random_simplex(rng, n).vertices)
    return out
