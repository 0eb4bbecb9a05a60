"""Per-simplex constructions: volume, centroid, circumcenter, medial simplex
and the Möbius center of a single simplex."""

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import DegenerateSimplex, SingularMatrix
from .linalg import determinant, solve_linear

DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Simplex:
    """An oriented n-simplex in R^n; vertex order defines orientation."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] + 1:
            raise ValueError(f"an n-simplex in R^n needs (n+1, n) vertices, got shape {v.shape}")
        if v.shape[1] < 1:
            raise ValueError("dimension must be positive")
        if not np.all(np.isfinite(v)):
            raise ValueError("simplex vertices must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self):
        return self.vertices.shape[1]

    def __len__(self):
        return self.vertices.shape[0]


@dataclass(frozen=True)
class Circumdata:
    center: np.ndarray
    radius: float


def _verts(s):
    if isinstance(s, Simplex):
        return s.vertices
    return Simplex(s).vertices


def diameter(s):
    """Largest pairwise vertex distance."""
    v = _verts(s)
    diff = v[:, None, :] - v[None, :, :]
    return float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))


def signed_volume(s):
    """Oriented volume ``det(v1 - v0, ..., vn - v0) / n!``."""
    v = _verts(s)
    n = v.shape[1]
    return determinant((v[1:] - v[0]).T) / factorial(n)


def degeneracy_threshold(s):
    v = _verts(s)
    return DEGENERACY_RTOL * diameter(v) ** v.shape[1]


def is_degenerate(s):
    return abs(signed_volume(s)) <= degeneracy_threshold(s)


def centroid(s):
    return _verts(s).mean(axis=0)


def circumcenter(s):
    """Center and radius of the circumscribed sphere.

    The center ``p`` solves ``<p - v0, vi - v0> = |vi - v0|^2 / 2`` for
    ``i = 1..n``, which is the equidistance condition written relative to v0.

    Raises:
        DegenerateSimplex: if the simplex is flat at the scale-relative threshold.
    """
    v = _verts(s)
    if is_degenerate(v):
        raise DegenerateSimplex(f"simplex volume {signed_volume(v):.3g} is below the degeneracy threshold")
    edges = v[1:] - v[0]
    try:
        q = solve_linear(edges, 0.5 * np.sum(edges * edges, axis=1))
    except SingularMatrix as exc:
        raise DegenerateSimplex(str(exc)) from exc
    return Circumdata(center=v[0] + q, radius=float(np.linalg.norm(q)))


def medial_simplex(s):
    """Simplex of facet centroids; vertex i is the centroid of the facet opposite vertex i."""
    v = _verts(s)
    n = v.shape[1]
    return Simplex((v.sum(axis=0) - v) / n)


def mobius_center_simplex(s):
    """Möbius center of a simplex: the circumcenter of its medial simplex."""
    return circumcenter(medial_simplex(s)).center
