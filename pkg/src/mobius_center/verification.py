"""Seeded property suite behind ``mobius-center verify``.

Every trial is driven by ``numpy.random.default_rng([seed, dim, trial])`` so a
failure can be replayed from the printed triple alone. Each property maps a
trial to a dimensionless residual that passes when it is at most the
property's tolerance.
"""

from dataclasses import dataclass, field

import numpy as np

from . import generators as gen
from . import polytope as pt
from . import simplex as sx
from .derivative import dlogvol_analytic, dlogvol_fd, mobius_center_from_derivatives
from .errors import DegenerateTriangulation, InvalidField
from .fields import QuadraticField, divergence, divergence_fd, integrate_flow, invert_in_sphere
from .linalg import solve_linear

FD_TRIALS = 20

TOLERANCES = {
    "main_identity": 1e-8,
    "projective_identity": 1e-8,
    "interpolating_identity": 1e-8,
    "isometry_kernel": 1e-10,
    "linearity": 1e-10,
    "center_recovery": 1e-8,
    "triangulation_independence": 1e-8,
    "euler_relation": 1e-8,
    "additivity": 1e-8,
    "similarity_equivariance": 1e-8,
    "simplex_equidistance": 1e-9,
    "simplex_medial_relation": 1e-9,
    "simplex_circumcenter_relation": 1e-9,
    "divergence_fd": 1e-9,
    "fd_agreement": 1e-6,
    "fd_convergence": 1.0 / 3.5,
    "rk4_order": 1.0 / 8.0,
    "sphere_inversion": 1e-12,
    "mobius_validation": 0.5,
    "cycle_validation": 0.5,
    "linear_solve": 1e-10,
}


@dataclass
class PropertyResult:
    name: str
    tolerance: float
    passed: int = 0
    failed: int = 0
    worst: float = 0.0
    failures: list = field(default_factory=list)  # (dim, trial, residual)

    @property
    def ok(self):
        return self.failed == 0


@dataclass
class VerifyReport:
    seed: int
    trials: int
    dims: tuple
    results: dict

    @property
    def ok(self):
        return all(r.ok for r in self.results.values())


def _random_apex(rng, p):
    lo, hi = p.vertices.min(axis=0), p.vertices.max(axis=0)
    return lo + rng.random(p.dim) * (hi - lo)


def _valid_apex_centers(rng, p, attempts=20):
    for _ in range(attempts):
        apex = _random_apex(rng, p)
        try:
            return pt.centers(p, apex)
        except DegenerateTriangulation:
            continue
    raise DegenerateTriangulation("no nondegenerate apex found")


def _rel(err, scale):
    return float(err) / (1.0 + float(scale))


def _simplex_residuals(rng, n):
    s = gen.random_simplex(rng, n)
    v = s.vertices
    scale = sx.diameter(s)
    cc = sx.circumcenter(s)
    medial = sx.medial_simplex(s)
    mc = sx.circumcenter(medial).center
    cm = sx.centroid(s)
    d_orig = np.linalg.norm(v - cc.center, axis=1)
    d_med = np.linalg.norm(medial.vertices - mc, axis=1)
    equi = max(np.ptp(d_orig), np.ptp(d_med))
    medial_rel = np.max(np.abs(mc - ((n + 1) / n * cm - cc.center / n)))
    cc_rel = np.max(np.abs(cc.center - (v.sum(axis=0) - n * sx.mobius_center_simplex(s))))
    return {
        "simplex_equidistance": _rel(equi, scale),
        "simplex_medial_relation": _rel(medial_rel, scale),
        "simplex_circumcenter_relation": _rel(cc_rel, scale),
    }


def _fd_residuals(f, p, analytic):
    err1 = abs(dlogvol_fd(f, p, 1e-3) - analytic)
    err2 = abs(dlogvol_fd(f, p, 5e-4) - analytic)
    ratio = 0.0 if err1 < 1e-11 else err2 / err1
    return {"fd_agreement": err2 / (1.0 + abs(analytic)), "fd_convergence": ratio}


def _rk4_order(rng, p):
    """Error ratio of log-volume under a homothety when the step halves."""
    lam = rng.uniform(0.5, 1.5)
    f = QuadraticField("mobius", lam * np.eye(p.dim), np.zeros(p.dim), np.zeros(p.dim))
    t = 1.0
    exact = np.log(abs(pt.volume(p))) + p.dim * lam * t
    err_coarse = abs(integrate_flow(f, p, t, 4).logvol[-1] - exact)
    err_fine = abs(integrate_flow(f, p, t, 8).logvol[-1] - exact)
    return 0.0 if err_coarse < 1e-13 else err_fine / err_coarse


def _corrupt(p, rng):
    i = int(rng.integers(len(p.facets)))
    facets = list(p.facets)
    idx = facets[i].indices
    facets[i] = pt.Facet((idx[1], idx[0]) + idx[2:], facets[i].weight)
    return pt.SimplicialPolytope(p.dim, p.vertices, tuple(facets))


def run_trial(seed, dim, trial):
    """All property residuals for one ``(seed, dim, trial)``."""
    rng = np.random.default_rng([seed, dim, trial])
    n = dim
    p = gen.random_polytope(rng, n)
    diam = pt.diameter(p)
    rep = pt.centers(p)
    out = {}

    f = gen.random_field(rng, n, "mobius", polytope=p)
    analytic = dlogvol_analytic(f, p)
    out["main_identity"] = abs(analytic - divergence(f, rep.m)) / (1.0 + abs(analytic))

    for kind, center in (("projective", rep.cm), ("interpolating", rep.ccm)):
        g = gen.random_field(rng, n, kind, polytope=p)
        d = dlogvol_analytic(g, p)
        out[f"{kind}_identity"] = abs(d - divergence(g, center)) / (1.0 + abs(d))

    iso = gen.random_isometry_field(rng, n)
    out["isometry_kernel"] = abs(dlogvol_analytic(iso, p))

    g = gen.random_field(rng, n, "mobius", polytope=p)
    alpha, beta = rng.uniform(-2.0, 2.0, size=2)
    da, dg = analytic, dlogvol_analytic(g, p)
    combo = dlogvol_analytic(alpha * f + beta * g, p)
    out["linearity"] = abs(combo - alpha * da - beta * dg) / (1.0 + abs(alpha * da) + abs(beta * dg))

    out["center_recovery"] = _rel(np.max(np.abs(mobius_center_from_derivatives(p) - rep.m)), diam)

    other = _valid_apex_centers(rng, p)
    gap = max(np.max(np.abs(getattr(rep, k) - getattr(other, k))) for k in ("cm", "ccm", "m"))
    out["triangulation_independence"] = _rel(gap, diam)
    out["euler_relation"] = _rel(max(rep.residual_euler, other.residual_euler), diam)

    # second polytope placed in a shared vertex pool with P
    q = gen.random_crosspolytope(rng, n) if n > 2 else gen.random_convex_polygon(rng)
    q = q.with_vertices(q.vertices + rng.uniform(-0.5, 0.5, size=n))
    pool = np.vstack([p.vertices, q.vertices])
    shift = len(p.vertices)
    pp = pt.SimplicialPolytope(n, pool, p.facets)
    qq = pt.SimplicialPolytope(n, pool, tuple(pt.Facet(tuple(i + shift for i in fc.indices), fc.weight) for fc in q.facets))
    vp, vq = pt.volume(pp), pt.volume(qq)
    try:
        both = pt.centers(pp + qq)
        expected_m = (vp * pt.mobius_center(pp) + vq * pt.mobius_center(qq)) / (vp + vq)
        add_gap = max(abs(both.vol - vp - vq) / (abs(vp) + abs(vq)), np.max(np.abs(both.m - expected_m)))
        out["additivity"] = _rel(add_gap, pt.diameter(pp))
    except DegenerateTriangulation:
        out["additivity"] = 0.0

    rot, scale, shift_t = gen.random_similarity(rng, n)
    mapped = pt.apply_similarity(p, rot, scale, shift_t)
    m_mapped = pt.mobius_center(mapped)
    out["similarity_equivariance"] = _rel(np.max(np.abs(m_mapped - (scale * rot @ rep.m + shift_t))), pt.diameter(mapped))

    out.update(_simplex_residuals(rng, n))

    worst = 0.0
    for kind in ("mobius", "projective", "interpolating"):
        h = gen.random_field(rng, n, kind)
        x = rng.uniform(-2.0, 2.0, size=n)
        worst = max(worst, abs(divergence(h, x) - divergence_fd(h, x)) / (1.0 + np.max(np.abs(x))))
    out["divergence_fd"] = worst

    if trial < FD_TRIALS:
        out.update(_fd_residuals(f, p, analytic))
        out["rk4_order"] = _rk4_order(rng, p)

    center = rng.uniform(-1.0, 1.0, size=n)
    radius = rng.uniform(0.5, 2.0)
    x = rng.uniform(-3.0, 3.0, size=n)
    u = rng.normal(size=n)
    on_sphere = center + radius * u / np.linalg.norm(u)
    out["sphere_inversion"] = max(
        _rel(np.max(np.abs(invert_in_sphere(center, radius, invert_in_sphere(center, radius, x)) - x)), np.max(np.abs(x))),
        _rel(np.max(np.abs(invert_in_sphere(center, radius, on_sphere) - on_sphere)), radius),
    )

    skew = gen.random_skew(rng, n)
    accepted = True
    try:
        QuadraticField("mobius", skew + rng.uniform(-1.0, 1.0) * np.eye(n), np.zeros(n), np.zeros(n))
    except InvalidField:
        accepted = False
    rejected = False
    try:
        QuadraticField("mobius", skew + np.diag(np.arange(1.0, n + 1.0)), np.zeros(n), np.zeros(n))
    except InvalidField:
        rejected = True
    out["mobius_validation"] = 0.0 if (accepted and rejected) else 1.0

    out["cycle_validation"] = 0.0 if (not pt.validate_cycle(p) and pt.validate_cycle(_corrupt(p, rng))) else 1.0

    mat = rng.normal(size=(n, n)) + n * np.eye(n)
    rhs = rng.normal(size=n)
    sol = solve_linear(mat, rhs)
    out["linear_solve"] = np.linalg.norm(mat @ sol - rhs) / (1.0 + np.linalg.norm(rhs))
    return out


def verify(seed=42, trials=200, dims=(2, 3, 4, 5), tol=None, progress=None):
    """Run every property over ``trials`` trials per dimension.

    ``tol`` overrides all tolerances at once. Results are aggregated in
    (dim, trial) order so the report is independent of evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    results = {name: PropertyResult(name, TOLERANCES[name] if tol is None else tol) for name in TOLERANCES}
    for dim in dims:
        for trial in range(trials):
            for name, residual in run_trial(seed, dim, trial).items():
                r = results[name]
                residual = float(residual)
                r.worst = max(r.worst, residual) if np.isfinite(residual) else float("inf")
                if np.isfinite(residual) and residual <= r.tolerance:
                    r.passed += 1
                else:
                    r.failed += 1
                    r.failures.append((dim, trial, residual))
            if progress is not None:
                progress(dim, trial)
    return VerifyReport(seed, trials, tuple(dims), results)
