"""Command-line front end.

    uehling tabulate [--routes integral,closed-reduced] [--grid-log 1e-3:20:60] ...
    uehling verify   [--tol 1e-9] ...
    uehling ode      [--r0 0.5 --r-end 5 --steps 2048 --ic-source paper-f]
    uehling specfun  --function ki --n 2 --grid-lin 0:5:11

Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O error,
4 numerical non-convergence.
"""

import argparse
import io
import json
import math
import sys

import numpy as np

from . import odecheck, potential as pot, specfun
from .errors import ConvergenceError, DomainError
from .potential import ALPHA_DEFAULT, PhysicalParams, Route, UnitSystem
from .quadrature import AccuracyConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_NONCONV = 0, 1, 2, 3, 4

DEFAULT_GRID = (1e-3, 20.0, 60)
ROUTE_ALIASES = {
    "integral": Route.INTEGRAL,
    "closed-ki024": Route.CLOSED_KI024,
    "closed-reduced": Route.CLOSED_REDUCED,
    "paper-constant": Route.PAPER_CONSTANT_COEFF,
    "paper-constant-coeff": Route.PAPER_CONSTANT_COEFF,
}
DEFAULT_ROUTES = "integral,closed-ki024,closed-reduced,paper-constant"


class UsageError(Exception):
    pass


def fmt(v):
    """15 significant digits, scientific notation."""
    if isinstance(v, bool) or v is None:
        return str(v).lower() if v is not None else ""
    return f"{float(v):.14e}"


def rounded(v):
    """The value ``fmt`` prints, as a float, so CSV and JSON carry identical numbers."""
    v = float(v)
    return float(fmt(v)) if math.isfinite(v) else repr(v)


def parse_grid(spec, kind):
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"bad grid {spec!r}, expected min:max:n") from None
    if n < 1:
        raise UsageError("grid count must be >= 1")
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise UsageError(f"bad grid bounds {spec!r}")
    if n == 1:
        return np.array([lo])
    if kind == "log":
        if lo <= 0:
            raise UsageError("log grid needs min > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def parse_routes(spec):
    routes = []
    for name in spec.split(","):
        name = name.strip().replace("_", "-")
        if name not in ROUTE_ALIASES:
            raise UsageError(f"unknown route {name!r}; choose from {', '.join(sorted(ROUTE_ALIASES))}")
        route = ROUTE_ALIASES[name]
        if route not in routes:
            routes.append(route)
    return routes


def _grid(args, positive=True):
    if args.grid_log and args.grid_lin:
        raise UsageError("give only one of --grid-log and --grid-lin")
    if args.grid_log:
        grid = parse_grid(args.grid_log, "log")
    elif args.grid_lin:
        grid = parse_grid(args.grid_lin, "lin")
    else:
        lo, hi, n = DEFAULT_GRID
        if args.units == UnitSystem.ATOMIC.value:
            lo, hi = args.alpha * lo, args.alpha * hi
        grid = np.geomspace(lo, hi, n)
    if positive and not np.all(grid > 0):
        raise UsageError("grid radii must be > 0")
    return grid


def _params(args):
    return PhysicalParams(Q=args.q, alpha=args.alpha, unit_system=args.units)


# ---------------------------------------------------------------------------
# output


def emit_table(columns, rows, fmt_name, out):
    if fmt_name == "csv":
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(fmt(v) for v in row) + "\n")
        text = buf.getvalue()
    else:
        records = [{c: rounded(v) if not isinstance(v, bool) else v for c, v in zip(columns, row)} for row in rows]
        text = json.dumps({"columns": list(columns), "rows": records}, indent=2) + "\n"
    write_output(text, out)


def write_output(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _pair_dev(a, b):
    d = abs(a - b)
    if d == 0:
        return 0.0
    return d / abs(b) if b != 0 else math.inf


# ---------------------------------------------------------------------------
# commands


def run_tabulate(args):
    p, cfg = _params(args), AccuracyConfig()
    grid = _grid(args)
    routes = parse_routes(args.routes)
    pairs = [(routes[i], routes[j]) for i in range(len(routes)) for j in range(i + 1, len(routes))]
    columns = ["r", *(r.value for r in routes), "deriv"]
    columns += [f"dev_{a.value}_{b.value}" for a, b in pairs]
    columns += ["exp_scale", "total"]
    atomic = p.unit_system is UnitSystem.ATOMIC
    if atomic:
        columns.append("energy")
    rows = []
    for r in grid:
        values = {route: pot.evaluate(route, r, p, cfg).value for route in routes}
        row = [r, *(values[route] for route in routes), pot.uehling_derivative_integral(r, p, cfg)]
        row += [_pair_dev(values[a], values[b]) for a, b in pairs]
        row += [p.b * r, pot.total_potential(r, p, cfg)]
        if atomic:
            row.append(pot.interaction_energy_atomic(r, p.Q, p.alpha, cfg))
        rows.append(row)
    emit_table(columns, rows, args.format, args.out)
    return EXIT_OK


def report_payload(report, args, grid):
    checks = []
    for c in report.checks:
        checks.append({
            "check_name": c.check_name,
            "kind": c.kind,
            "grid": c.grid,
            "max_abs": rounded(c.max_abs),
            "max_rel": rounded(c.max_rel),
            "tolerance": None if c.tolerance is None else rounded(c.tolerance),
            "passed": c.passed,
            "note": c.note,
        })
    return {
        "passed": report.passed,
        "units": args.units,
        "Q": rounded(args.q),
        "alpha": rounded(args.alpha),
        "grid": odecheck.describe_grid(grid),
        "checks": checks,
    }


def run_verify(args):
    p, cfg = _params(args), AccuracyConfig()
    grid = _grid(args)
    report = odecheck.consistency_report(grid, p, cfg, tolerance=args.tol)
    if args.format == "json":
        write_output(json.dumps(report_payload(report, args, grid), indent=2) + "\n", args.out)
    else:
        columns = ["check_name", "kind", "grid", "max_abs", "max_rel", "tolerance", "passed"]
        lines = [",".join(columns)]
        for c in report.checks:
            tol = "" if c.tolerance is None else fmt(c.tolerance)
            passed = "" if c.passed is None else str(c.passed).lower()
            lines.append(",".join([c.check_name, c.kind, c.grid.replace(",", ";"), fmt(c.max_abs), fmt(c.max_rel), tol, passed]))
        write_output("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def run_ode(args):
    p, cfg = _params(args), AccuracyConfig()
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    if not (args.r0 > 0 and args.r_end > args.r0):
        raise UsageError("need 0 < r0 < r_end")
    if args.ic_source == "paper-f":
        W0 = odecheck.paper_bracket_F(args.r0, p, cfg)
        P0 = odecheck.paper_bracket_F_prime(args.r0, p, cfg)
        reference = lambda r: odecheck.paper_bracket_F(r, p, cfg)
    else:
        W0, P0 = odecheck.quadrature_initial_conditions(args.r0, p, cfg)
        reference = lambda r: r * pot.uehling_integral(r, p, cfg).value
    traj = odecheck.solve_ivp(args.r0, W0, P0, args.r_end, args.steps, p, cfg)
    ref = np.array([reference(r) for r in traj.r])
    dev = traj.W - ref
    rows = [[r, w, pp, f, d] for r, w, pp, f, d in zip(traj.r, traj.W, traj.P, ref, dev)]
    emit_table(["r", "W", "P", "reference", "deviation"], rows, args.format, args.out)
    if args.ic_source == "paper-f":
        tol = 1e-8 if args.tol is None else args.tol
        scale = np.max(np.abs(ref))
        if np.max(np.abs(dev)) > tol * scale:
            print(f"ode: max deviation {np.max(np.abs(dev)):.3e} exceeds {tol:g} * max|F|", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK


def run_specfun(args):
    cfg = AccuracyConfig()
    grid = _grid(args, positive=False)
    if args.function == "k0":
        fn = lambda x: specfun.k0(x, cfg)
    elif args.function == "k1":
        fn = lambda x: specfun.k1(x, cfg)
    else:
        fn = lambda x: specfun.bickley_ki(args.n, x, cfg)
    rows = []
    for x in grid:
        res = fn(x)
        rows.append([x, res.value, res.abs_error_estimate, float(res.underflowed)])
    emit_table(["x", "value", "abs_error", "underflowed"], rows, args.format, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--units", choices=[u.value for u in UnitSystem], default="relativistic")
    common.add_argument("--q", type=float, default=1.0, help="nuclear charge number Q")
    common.add_argument("--alpha", type=float, default=ALPHA_DEFAULT)
    common.add_argument("--grid-log", metavar="MIN:MAX:N")
    common.add_argument("--grid-lin", metavar="MIN:MAX:N")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--tol", type=float, default=None, help="override asserted tolerances")

    parser = argparse.ArgumentParser(prog="uehling", description="Uehling potential evaluation and cross-checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    tab = sub.add_parser("tabulate", parents=[common], help="tabulate potentials over a radial grid")
    tab.add_argument("--routes", default=DEFAULT_ROUTES)

    sub.add_parser("verify", parents=[common], help="run the consistency report")

    ode = sub.add_parser("ode", parents=[common], help="integrate the ODE from initial data")
    ode.add_argument("--r0", type=float, default=0.5)
    ode.add_argument("--r-end", type=float, default=5.0)
    ode.add_argument("--steps", type=int, default=2048)
    ode.add_argument("--ic-source", choices=["paper-f", "quadrature"], default="paper-f")

    sf = sub.add_parser("specfun", parents=[common], help="tabulate K0, K1 or Ki_n")
    sf.add_argument("--function", choices=["k0", "k1", "ki"], default="k0")
    sf.add_argument("--n", type=int, default=1)
    return parser


COMMANDS = {"tabulate": run_tabulate, "verify": run_verify, "ode": run_ode, "specfun": run_specfun}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"uehling {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"uehling {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConvergenceError as exc:
        print(f"uehling {args.command}: {exc}", file=sys.stderr)
        return EXIT_NONCONV


if __name__ == "__main__":
    sys.exit(main())
