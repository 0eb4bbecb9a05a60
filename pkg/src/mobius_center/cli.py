"""Command-line front end.

Exit codes: 0 ok, 1 property failure, 2 usage or parse error, 3 invalid cycle,
4 zero volume or no usable triangulation, 5 flow failure.
"""

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import generators as gen
from . import polytope as pt
from .errors import DegenerateTriangulation, FlowError, FormatError, InvalidField, ZeroVolume
from .fields import divergence, integrate_flow, load_field
from .verification import verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CYCLE, EXIT_ZERO, EXIT_FLOW = range(6)


class UsageError(Exception):
    pass


def fmt(x):
    """12 significant digits; -0 prints as 0 so output is stable."""
    x = float(x)
    return format(0.0 if x == 0 else x, ".12g")


def fmt_vec(v):
    return " ".join(fmt(x) for x in v)


def _load_valid(path, out):
    try:
        p = pt.load_polytope(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    violations = pt.validate_cycle(p)
    if violations:
        print(f"{path}: not a cycle ({len(violations)} violations)", file=out)
        for v in violations:
            print(f"  {v}", file=out)
        return None
    return p


def cmd_centers(args, out):
    p = _load_valid(args.file, out)
    if p is None:
        return EXIT_CYCLE
    try:
        r = pt.centers(p)
    except (ZeroVolume, DegenerateTriangulation) as exc:
        print(f"{args.file}: {exc}", file=out)
        return EXIT_ZERO
    print(f"dim            {p.dim}", file=out)
    print(f"vol            {fmt(r.vol)}", file=out)
    print(f"cm             {fmt_vec(r.cm)}", file=out)
    print(f"ccm            {fmt_vec(r.ccm)}", file=out)
    print(f"m              {fmt_vec(r.m)}", file=out)
    print(f"residual_euler {format(r.residual_euler, '.3e')}", file=out)
    return EXIT_OK


def _parse_dims(text):
    try:
        dims = tuple(int(d) for d in text.split(",") if d.strip())
    except ValueError as exc:
        raise UsageError(f"bad --dims {text!r}") from exc
    if not dims or min(dims) < 2:
        raise UsageError("--dims needs integers >= 2")
    return dims


def cmd_verify(args, out):
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    dims = _parse_dims(args.dims)
    report = verify(args.seed, args.trials, dims, args.tol)
    print(f"seed {args.seed}  trials {args.trials}  dims {','.join(map(str, dims))}", file=out)
    for r in report.results.values():
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.name:30s} {r.passed:6d} passed {r.failed:6d} failed  worst {r.worst:.3e}  tol {r.tolerance:.1e}", file=out)
        for dim, trial, residual in r.failures[: args.show_failures]:
            print(f"     reproduce: --seed {args.seed} dim {dim} trial {trial} (rng [{args.seed}, {dim}, {trial}]) residual {residual:.3e}", file=out)
    failed = [r.name for r in report.results.values() if not r.ok]
    print(f"{'all properties passed' if not failed else 'failed: ' + ', '.join(failed)}", file=out)
    return EXIT_OK if not failed else EXIT_FAIL


def _write_trajectory(traj, field, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "logvol", "div_at_m"])
        for k, (t, lv) in enumerate(zip(traj.times, traj.logvol)):
            try:
                div = float(divergence(field, pt.mobius_center(traj.polytope_at(k))))
            except (ZeroVolume, DegenerateTriangulation):
                div = float("nan")
            w.writerow([fmt(t), fmt(lv), fmt(div)])


def cmd_flow(args, out):
    p = _load_valid(args.polytope, out)
    if p is None:
        return EXIT_CYCLE
    try:
        field = load_field(args.field)
    except OSError as exc:
        raise UsageError(f"cannot read {args.field}: {exc.strerror}") from exc
    if field.dim != p.dim:
        raise UsageError(f"field dimension {field.dim} does not match polytope dimension {p.dim}")
    if args.steps < 1 or not args.t > 0:
        raise UsageError("--t must be positive and --steps at least 1")
    snapshot = Path(args.snapshot) if args.snapshot else Path(args.out).with_suffix(".final.json")
    try:
        traj = integrate_flow(field, p, args.t, args.steps)
    except FlowError as exc:
        if exc.trajectory is not None:
            _write_trajectory(exc.trajectory, field, args.out)
        print(f"flow failed at t={fmt(exc.time)}: {exc}", file=out)
        return EXIT_FLOW
    _write_trajectory(traj, field, args.out)
    pt.save_polytope(traj.final, snapshot)
    print(f"wrote {args.out} ({len(traj.times)} rows) and {snapshot}", file=out)
    return EXIT_OK


def cmd_random(args, out):
    if args.dim < 2:
        raise UsageError("--dim must be at least 2")
    rng = np.random.default_rng(args.seed)
    if args.kind == "polygon":
        if args.dim != 2:
            raise UsageError("polygon generator only exists in dimension 2")
        p = gen.random_convex_polygon(rng)
    else:
        p = gen.random_crosspolytope(rng, args.dim)
    pt.save_polytope(p, args.out)
    print(f"wrote {args.out} ({len(p.facets)} facets)", file=out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="mobius-center", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("centers", help="print volume, cm, ccm and Möbius center of a polytope")
    c.add_argument("file")
    c.set_defaults(func=cmd_centers)

    v = sub.add_parser("verify", help="run the seeded property suite")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--dims", default="2,3,4,5")
    v.add_argument("--tol", type=float, default=None, help="override every tolerance")
    v.add_argument("--show-failures", type=int, default=3, help="failing trials listed per property")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("flow", help="integrate a field on a polytope and write a CSV trajectory")
    f.add_argument("polytope")
    f.add_argument("field")
    f.add_argument("--t", type=float, required=True)
    f.add_argument("--steps", type=int, required=True)
    f.add_argument("--out", required=True)
    f.add_argument("--snapshot", default=None, help="final polytope JSON (default: <out>.final.json)")
    f.set_defaults(func=cmd_flow)

    r = sub.add_parser("random", help="write a random valid polytope")
    r.add_argument("--dim", type=int, required=True)
    r.add_argument("--kind", choices=("polygon", "crosspoly"), required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_random)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=out)
        return EXIT_USAGE
    except (FormatError, InvalidField) as exc:
        print(f"parse error: {exc}", file=out)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
