"""Logarithmic volume derivative of a polytope along a quadratic field.

``dlogvol_analytic`` differentiates the cone-triangulation determinants at
t = 0 and never touches a center; ``dlogvol_fd`` measures the same quantity by
flowing the vertices. The divergence at the appropriate center is then
compared against these.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np

from . import polytope as pt
from .fields import QuadraticField, divergence, integrate_flow
from .errors import DimensionMismatch
from .linalg import determinant

FD_STEPS = 8
CENTER_FOR_KIND = {"mobius": "m", "projective": "cm", "interpolating": "ccm"}


@dataclass(frozen=True)
class DerivativeReport:
    analytic: float
    fd: float
    div_at_m: float
    div_at_cm: float
    div_at_ccm: float
    residual: float
    kind: str = "mobius"

    @property
    def relative_residual(self):
        return self.residual / (1.0 + abs(self.analytic))


def _dvol_simplex(f, verts):
    """d/dt of the simplex volume when every vertex moves with ``f``."""
    n = verts.shape[1]
    vel = f(verts)
    edges = verts[1:] - verts[0]
    dedges = vel[1:] - vel[0]
    total = 0.0
    for i in range(n):
        m = edges.copy()
        m[i] = dedges[i]
        total += determinant(m)
    return total / factorial(n)


def dvol_analytic(f, p, apex=None):
    """Exact first variation of the volume; the apex moves with the field too."""
    if f.dim != p.dim:
        raise DimensionMismatch(f"field dimension {f.dim} != polytope dimension {p.dim}")
    tri = pt.nondegenerate_triangulation(p, apex)
    vol = pt.checked_volume(p, tri)
    dvol = sum(w * _dvol_simplex(f, s.vertices) for s, w in tri.simplices)
    return dvol, vol


def dlogvol_analytic(f, p, apex=None):
    dvol, vol = dvol_analytic(f, p, apex)
    return dvol / vol


def default_fd_step(f):
    return 1e-4 / (1.0 + f.magnitude)


def dlogvol_fd(f, p, h=None, steps=FD_STEPS):
    """Central difference of log|vol| along the RK4 flow over ``[-h, h]``."""
    h = default_fd_step(f) if h is None else h
    forward = integrate_flow(f, p, h, steps).logvol[-1]
    backward = integrate_flow(-f, p, h, steps).logvol[-1]
    return (forward - backward) / (2.0 * h)


def verify_center_identity(f, p, apex=None, with_fd=True, h=None):
    """Compare the log-volume derivative against the divergence at each center.

    The residual uses the center matched to the field kind: Möbius center for
    Möbius fields, center of mass for projective fields, circumcenter of mass
    for interpolating fields.
    """
    analytic = dlogvol_analytic(f, p, apex)
    report = pt.centers(p, apex)
    divs = {
        "m": float(divergence(f, report.m)),
        "cm": float(divergence(f, report.cm)),
        "ccm": float(divergence(f, report.ccm)),
    }
    fd = dlogvol_fd(f, p, h) if with_fd else float("nan")
    return DerivativeReport(
        analytic=analytic,
        fd=fd,
        div_at_m=divs["m"],
        div_at_cm=divs["cm"],
        div_at_ccm=divs["ccm"],
        residual=abs(analytic - divs[CENTER_FOR_KIND[f.kind]]),
        kind=f.kind,
    )


def mobius_center_from_derivatives(p, apex=None):
    """Recover the Möbius center from volume derivatives alone.

    For the field with A = 0, c = 0, b = e_k the divergence is ``-2n x_k``, so
    the k-th coordinate is ``-dlogvol / (2n)``.
    """
    n = p.dim
    out = np.empty(n)
    zero = np.zeros((n, n))
    for k in range(n):
        b = np.zeros(n)
        b[k] = 1.0
        out[k] = -dlogvol_analytic(QuadraticField("mobius", zero, b, np.zeros(n)), p, apex) / (2.0 * n)
    return out
