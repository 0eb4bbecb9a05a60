"""Quadratic vector fields acting on polytopes through their vertices.

Three families share the parameters ``(A, b, c)``:

* ``mobius``:        x' = A x + |x|^2 b - 2 <b, x> x + c,  with A - (tr A / n) I skew
* ``projective``:    x' = A x + <b, x> x + c
* ``interpolating``: x' = A x + |x|^2 b + c

Each has affine divergence ``tr A + k <b, x>`` with k = -2n, n + 1 and 2
respectively.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import polytope as pt
from . import simplex as sx
from .errors import DimensionMismatch, FlowError, FormatError, InvalidField, NonFinite, PoleHit, VolumeCollapse
from .linalg import is_skew_symmetric_shifted

KINDS = ("mobius", "projective", "interpolating")
MOBIUS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class QuadraticField:
    kind: str
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidField(f"unknown field kind {self.kind!r}; expected one of {KINDS}")
        A = np.array(self.A, dtype=float)
        b = np.array(self.b, dtype=float)
        c = np.array(self.c, dtype=float)
        n = b.shape[0] if b.ndim == 1 else -1
        if n < 1 or A.shape != (n, n) or c.shape != (n,):
            raise DimensionMismatch(f"inconsistent field shapes A{A.shape}, b{b.shape}, c{c.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise InvalidField("field parameters must be finite")
        if self.kind == "mobius" and not is_skew_symmetric_shifted(A, MOBIUS_TOL * max(1.0, np.max(np.abs(A)))):
            raise InvalidField("mobius field needs A - (tr A / n) I to be skew-symmetric")
        for arr in (A, b, c):
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def dim(self):
        return self.b.shape[0]

    @property
    def magnitude(self):
        """Largest parameter entry; sets the finite-difference step scale."""
        return float(max(np.max(np.abs(self.A)), np.max(np.abs(self.b)), np.max(np.abs(self.c))))

    def __call__(self, x):
        return evaluate(self, x)

    def __mul__(self, alpha):
        return QuadraticField(self.kind, alpha * self.A, alpha * self.b, alpha * self.c)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __add__(self, other):
        if not isinstance(other, QuadraticField):
            return NotImplemented
        if other.kind != self.kind:
            raise InvalidField(f"cannot add {self.kind} and {other.kind} fields")
        return QuadraticField(self.kind, self.A + other.A, self.b + other.b, self.c + other.c)


def mobius_field(skew=None, lam=0.0, b=None, c=None, dim=None):
    """Build a Möbius field from its skew part, dilation rate and vectors b, c."""
    n = dim
    for arr in (skew, b, c):
        if arr is not None:
            n = np.asarray(arr).shape[0]
            break
    if n is None:
        raise ValueError("cannot infer dimension; pass dim")
    skew = np.zeros((n, n)) if skew is None else np.asarray(skew, dtype=float)
    b = np.zeros(n) if b is None else b
    c = np.zeros(n) if c is None else c
    return QuadraticField("mobius", skew + lam * np.eye(n), b, c)


def _points(f, x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != f.dim or x.ndim not in (1, 2):
        raise DimensionMismatch(f"point shape {x.shape} does not match field dimension {f.dim}")
    return x


def evaluate(f, x):
    """Velocity at a point ``(n,)`` or at each row of ``(k, n)``."""
    x = _points(f, x)
    xb = x @ f.b
    lin = x @ f.A.T + f.c
    if f.kind == "mobius":
        sq = np.sum(x * x, axis=-1)
        return lin + np.multiply.outer(sq, f.b) - 2.0 * xb[..., None] * x
    if f.kind == "projective":
        return lin + xb[..., None] * x
    sq = np.sum(x * x, axis=-1)
    return lin + np.multiply.outer(sq, f.b)


def divergence_coefficient(kind, n):
    return {"mobius": -2.0 * n, "projective": n + 1.0, "interpolating": 2.0}[kind]


def divergence(f, x):
    """Closed-form divergence ``tr A + k <b, x>``."""
    x = _points(f, x)
    return np.trace(f.A) + divergence_coefficient(f.kind, f.dim) * (x @ f.b)


def divergence_fd(f, x, h=1e-3):
    """Central-difference divergence; exact up to rounding for quadratic fields."""
    if h <= 0:
        raise ValueError("step h must be positive")
    x = _points(f, x)
    if x.ndim != 1:
        raise DimensionMismatch("divergence_fd takes a single point")
    total = 0.0
    for i in range(f.dim):
        e = np.zeros(f.dim)
        e[i] = h
        total += (evaluate(f, x + e)[i] - evaluate(f, x - e)[i]) / (2.0 * h)
    return total


@dataclass
class FlowTrajectory:
    polytope: pt.SimplicialPolytope  # initial state; snapshots share its facets
    times: list
    snapshots: list
    logvol: list

    def polytope_at(self, k):
        return self.polytope.with_vertices(self.snapshots[k])

    @property
    def final(self):
        return self.polytope_at(-1)


def rk4_step(f, y, dt):
    k1 = evaluate(f, y)
    k2 = evaluate(f, y + 0.5 * dt * k1)
    k3 = evaluate(f, y + 0.5 * dt * k2)
    k4 = evaluate(f, y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _log_abs_volume(p, t, sign0):
    vol = pt.volume(p)
    threshold = sx.DEGENERACY_RTOL * pt.diameter(p) ** p.dim
    if not np.isfinite(vol):
        raise NonFinite(f"volume became non-finite at t={t:.6g}", t)
    if abs(vol) <= threshold or (sign0 and np.sign(vol) != sign0):
        raise VolumeCollapse(f"volume collapsed through zero at t={t:.6g}", t)
    return float(np.log(abs(vol))), float(np.sign(vol))


def integrate_flow(f, p, t_final, steps):
    """Flow every vertex of the pool with fixed-step RK4 and record log|vol|.

    Raises:
        VolumeCollapse: the volume reached the degeneracy threshold or changed sign.
        NonFinite: a vertex coordinate blew up.

    Either error carries the steps completed so far as ``exc.trajectory``.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if t_final <= 0:
        raise ValueError("t_final must be positive; flow the negated field to go backwards")
    if f.dim != p.dim:
        raise DimensionMismatch(f"field dimension {f.dim} != polytope dimension {p.dim}")
    dt = t_final / steps
    y = np.array(p.vertices, dtype=float)
    lv, sign0 = _log_abs_volume(p, 0.0, 0.0)
    times, snaps, logvol = [0.0], [y.copy()], [lv]
    try:
        for k in range(1, steps + 1):
            t = k * dt
            with np.errstate(over="ignore", invalid="ignore"):
                y = rk4_step(f, y, dt)
            if not np.all(np.isfinite(y)):
                raise NonFinite(f"flow blew up at t={t:.6g}", t)
            lv, _ = _log_abs_volume(p.with_vertices(y), t, sign0)
            times.append(t)
            snaps.append(y.copy())
            logvol.append(lv)
    except FlowError as exc:
        exc.trajectory = FlowTrajectory(p, times, snaps, logvol)
        raise
    return FlowTrajectory(p, times, snaps, logvol)


def invert_in_sphere(center, radius, x):
    """Inversion ``center + r^2 (x - center) / |x - center|^2``.

    Raises:
        PoleHit: if ``x`` is within ``1e-12 * radius`` of the center.
    """
    center = np.asarray(center, dtype=float)
    d = np.asarray(x, dtype=float) - center
    dist2 = float(d @ d)
    if np.sqrt(dist2) <= 1e-12 * radius:
        raise PoleHit("cannot invert the center of the sphere")
    return center + radius * radius * d / dist2


# JSON I/O


def to_dict(f):
    return {"kind": f.kind, "A": f.A.tolist(), "b": f.b.tolist(), "c": f.c.tolist()}


def from_dict(data):
    try:
        return QuadraticField(data["kind"], data["A"], data["b"], data["c"])
    except InvalidField:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"invalid field: {exc}") from exc


def load_field(path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path}: top level must be an object")
    return from_dict(data)


def save_field(f, path):
    Path(path).write_text(json.dumps(to_dict(f), indent=2) + "\n")
