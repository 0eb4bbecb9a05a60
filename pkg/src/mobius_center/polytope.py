"""Simplicial polytopes as integer-weighted cycles of oriented facets.

A polytope in R^n is stored as a vertex pool plus a list of weighted
(n-1)-simplices (facets) given by vertex indices. The stored index order is the
facet orientation. Volumes and centers are computed from the cone
triangulation over an apex: each facet ``(u_1, ..., u_n)`` contributes the
n-simplex ``(apex, u_1, ..., u_n)`` with the facet weight.
"""

import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import simplex as sx
from .errors import DegenerateTriangulation, FormatError, InvalidSimilarity, ZeroVolume

RETRY_SEED = 0x5EED
ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class Facet:
    indices: tuple
    weight: int = 1


@dataclass(frozen=True, eq=False)
class SimplicialPolytope:
    dim: int
    vertices: np.ndarray
    facets: tuple

    def __post_init__(self):
        n = int(self.dim)
        if n < 2:
            raise ValueError(f"dimension must be at least 2, got {n}")
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != n:
            raise ValueError(f"vertex pool must have shape (k, {n}), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex coordinates must be finite")
        v.setflags(write=False)
        facets = []
        for f in self.facets:
            # accepts Facet, (indices, weight), or bare indices
            if not isinstance(f, Facet):
                if len(f) == 2 and isinstance(f[0], (tuple, list, np.ndarray)):
                    f = Facet(tuple(f[0]), f[1])
                else:
                    f = Facet(tuple(f))
            idx = tuple(int(i) for i in f.indices)
            if len(idx) != n:
                raise ValueError(f"facet {idx} must have {n} vertices")
            if len(set(idx)) != n:
                raise ValueError(f"facet {idx} repeats a vertex")
            if min(idx) < 0 or max(idx) >= len(v):
                raise ValueError(f"facet {idx} references a vertex outside the pool of {len(v)}")
            if int(f.weight) != f.weight or f.weight == 0:
                raise ValueError(f"facet {idx} has invalid weight {f.weight!r}")
            facets.append(Facet(idx, int(f.weight)))
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "facets", tuple(facets))

    def with_vertices(self, vertices):
        """Same facet structure over a new vertex pool."""
        return SimplicialPolytope(self.dim, vertices, self.facets)

    def __neg__(self):
        return SimplicialPolytope(self.dim, self.vertices, tuple(Facet(f.indices, -f.weight) for f in self.facets))

    def __add__(self, other):
        if not isinstance(other, SimplicialPolytope):
            return NotImplemented
        if self.dim != other.dim or self.vertices.shape != other.vertices.shape or not np.array_equal(
            self.vertices, other.vertices
        ):
            raise ValueError("polytopes can only be added over a shared vertex pool")
        return SimplicialPolytope(self.dim, self.vertices, self.facets + other.facets)

    def __sub__(self, other):
        return self + (-other)


@dataclass(frozen=True)
class FaceViolation:
    face: tuple
    multiplicity: int

    def __str__(self):
        return f"face {list(self.face)} has net multiplicity {self.multiplicity:+d}"


@dataclass(frozen=True)
class Triangulation:
    simplices: tuple  # of (Simplex, weight)
    apex: np.ndarray
    degenerate: tuple = ()  # indices of simplices below the degeneracy threshold

    @property
    def volume(self):
        return float(sum(w * sx.signed_volume(s) for s, w in self.simplices))


@dataclass(frozen=True)
class CenterReport:
    vol: float
    cm: np.ndarray
    ccm: np.ndarray
    m: np.ndarray
    residual_euler: float
    diameter: float = field(default=float("nan"))


def diameter(p):
    """Bounding-box diagonal; the tolerance scale for everything polytope-level."""
    v = p.vertices
    if len(v) == 0:
        return 0.0
    return float(np.linalg.norm(v.max(axis=0) - v.min(axis=0)))


def _canonical(face):
    """Sorted face and the parity of the sorting permutation."""
    order = sorted(range(len(face)), key=lambda i: face[i])
    parity = 1
    seen = [False] * len(face)
    for start in range(len(face)):
        if seen[start]:
            continue
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return tuple(face[i] for i in order), parity


def boundary(p):
    """Net signed multiplicity of every (n-2)-face in the boundary of the facet chain."""
    counts = defaultdict(int)
    for f in p.facets:
        for k in range(len(f.indices)):
            face, parity = _canonical(f.indices[:k] + f.indices[k + 1:])
            counts[face] += f.weight * parity * (-1) ** k
    return counts


def validate_cycle(p):
    """Faces whose signed boundary multiplicity does not cancel; empty for a cycle."""
    return [FaceViolation(face, c) for face, c in sorted(boundary(p).items()) if c != 0]


def default_apex(p):
    return p.vertices.mean(axis=0)


def cone_triangulation(p, apex=None, allow_degenerate=False):
    """Cone every facet over ``apex`` (default: mean of the vertex pool).

    Raises:
        DegenerateTriangulation: if some cone simplex is flat and
            ``allow_degenerate`` is false.
    """
    apex = default_apex(p) if apex is None else np.asarray(apex, dtype=float)
    if apex.shape != (p.dim,):
        raise ValueError(f"apex must have shape ({p.dim},), got {apex.shape}")
    simplices = []
    degenerate = []
    for i, f in enumerate(p.facets):
        s = sx.Simplex(np.vstack([apex, p.vertices[list(f.indices)]]))
        if sx.is_degenerate(s):
            degenerate.append(i)
        simplices.append((s, f.weight))
    if degenerate and not allow_degenerate:
        raise DegenerateTriangulation(
            f"{len(degenerate)} of {len(simplices)} cone simplices are degenerate for apex {apex.tolist()}",
            degenerate,
        )
    return Triangulation(tuple(simplices), apex, tuple(degenerate))


def volume(p, apex=None):
    """Algebraic volume; flat cone simplices contribute zero and are allowed here."""
    return cone_triangulation(p, apex, allow_degenerate=True).volume


def _retry_apex(p):
    rng = np.random.default_rng(RETRY_SEED)
    lo, hi = p.vertices.min(axis=0), p.vertices.max(axis=0)
    return lo + rng.random(p.dim) * (hi - lo)


def nondegenerate_triangulation(p, apex=None):
    """Cone triangulation with no flat simplices.

    With the default apex, one retry from a seeded random point of the bounding
    box is made before giving up.
    """
    if apex is not None:
        return cone_triangulation(p, apex)
    try:
        return cone_triangulation(p)
    except DegenerateTriangulation:
        return cone_triangulation(p, _retry_apex(p))


def checked_volume(p, tri):
    vol = tri.volume
    if abs(vol) <= sx.DEGENERACY_RTOL * diameter(p) ** p.dim:
        raise ZeroVolume(f"polytope volume {vol:.3g} is zero at the degeneracy threshold")
    return vol


def _weighted_center(p, per_simplex, apex):
    tri = nondegenerate_triangulation(p, apex)
    vol = checked_volume(p, tri)
    total = np.zeros(p.dim)
    for s, w in tri.simplices:
        total += w * sx.signed_volume(s) * per_simplex(s)
    return total / vol


def center_of_mass(p, apex=None):
    return _weighted_center(p, sx.centroid, apex)


def circumcenter_of_mass(p, apex=None):
    return _weighted_center(p, lambda s: sx.circumcenter(s).center, apex)


def mobius_center(p, apex=None):
    return _weighted_center(p, sx.mobius_center_simplex, apex)


def centers(p, apex=None):
    """All three centers from one triangulation plus the Euler-relation residual.

    ``residual_euler`` is the max-norm gap between the circumcenter of mass
    aggregated directly and ``(n+1) cm - n m``.
    """
    tri = nondegenerate_triangulation(p, apex)
    vol = checked_volume(p, tri)
    n = p.dim
    cm = np.zeros(n)
    ccm = np.zeros(n)
    m = np.zeros(n)
    for s, w in tri.simplices:
        wv = w * sx.signed_volume(s)
        cm += wv * sx.centroid(s)
        ccm += wv * sx.circumcenter(s).center
        m += wv * sx.mobius_center_simplex(s)
    cm /= vol
    ccm /= vol
    m /= vol
    residual = float(np.max(np.abs(ccm - ((n + 1) * cm - n * m))))
    return CenterReport(vol=vol, cm=cm, ccm=ccm, m=m, residual_euler=residual, diameter=diameter(p))


def apply_similarity(p, rotation, scale, translation):
    """Map every vertex by ``x -> scale * R x + t``.

    Raises:
        InvalidSimilarity: if ``R`` is not orthogonal to 1e-10 or ``scale`` is 0.
    """
    r = np.asarray(rotation, dtype=float)
    t = np.asarray(translation, dtype=float)
    if r.shape != (p.dim, p.dim) or t.shape != (p.dim,):
        raise InvalidSimilarity("rotation/translation shape does not match the polytope dimension")
    if np.max(np.abs(r.T @ r - np.eye(p.dim))) > ORTHOGONALITY_TOL:
        raise InvalidSimilarity("rotation matrix is not orthogonal")
    if scale == 0 or not np.isfinite(scale):
        raise InvalidSimilarity(f"invalid scale {scale!r}")
    return p.with_vertices(scale * p.vertices @ r.T + t)


# JSON I/O


def to_dict(p):
    return {
        "dim": p.dim,
        "vertices": p.vertices.tolist(),
        "facets": [{"indices": list(f.indices), "weight": f.weight} for f in p.facets],
    }


def from_dict(data):
    try:
        dim = data["dim"]
        vertices = data["vertices"]
        raw = data["facets"]
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise FormatError("'dim' must be an integer")
        if not isinstance(vertices, list) or not isinstance(raw, list):
            raise FormatError("'vertices' and 'facets' must be lists")
        for row in vertices:
            if not isinstance(row, list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in row
            ):
                raise FormatError("every vertex must be a list of numbers")
        facets = []
        for f in raw:
            idx = f["indices"]
            weight = f.get("weight", 1)
            if not isinstance(idx, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in idx):
                raise FormatError("facet 'indices' must be a list of integers")
            if not isinstance(weight, int) or isinstance(weight, bool):
                raise FormatError("facet 'weight' must be an integer")
            facets.append(Facet(tuple(idx), weight))
        return SimplicialPolytope(dim, np.array(vertices, dtype=float).reshape(len(vertices), dim), tuple(facets))
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"invalid polytope: {exc}") from exc


def load_polytope(path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path}: top level must be an object")
    return from_dict(data)


def save_polytope(p, path):
    Path(path).write_text(json.dumps(to_dict(p), indent=2) + "\n")
