"""Command-line front door: evaluate the closed-form densities and
exponents on grids, run the Monte Carlo engines, and execute the full
verification suite.

Outputs are deterministic for a fixed configuration (the resolved config
and seed are embedded in every file); CSV carries 17 significant digits so
runs can be diffed for regressions.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .exceptions import NumericsError
from .lyapunov import (asympt_large_s, asympt_small_s, lyapunov_exact,
                       pade_resum, small_s_series)
from .measure import ModelParams, _cone_density_grid, density_axis
from .simulate import AxisGrid, ConeGrid, RngStream, empirical_measure
from .schrodinger import localization_rate, wavefunction_growth
from .stieltjes import map_to_ray_parameters, rate_estimate, log_errors, \
    StieltjesDraw, PROXY_FACTOR
from . import verify as verify_mod

SMALL_S_LIMIT = 0.5
LARGE_S_LIMIT = 10.0


# ---------------------------------------------------------------------------
# grid parsing and deterministic output
# ---------------------------------------------------------------------------

def parse_grid(spec: str) -> list[float]:
    """'lo:hi:n' -> n evenly spaced values; 'a,b,c' -> the list; 'x' -> [x]."""
    spec = spec.strip()
    if ":" in spec:
        lo, hi, n = spec.split(":")
        return [float(v) for v in np.linspace(float(lo), float(hi), int(n))]
    if "," in spec:
        return [float(v) for v in spec.split(",")]
    return [float(spec)]


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_output(out, config: dict, columns, rows, fmt: str,
                 extras: dict | None = None):
    """Emit rows as CSV (config and extras as leading comments) or JSON."""
    extras = extras or {}
    if fmt == "json":
        payload = {"config": config, "extras": extras,
                   "columns": list(columns),
                   "rows": [list(r) for r in rows]}
        text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    else:
        lines = [f"# config: {json.dumps(config, sort_keys=True)}"]
        for k in sorted(extras):
            lines.append(f"# {k} = {_fmt(extras[k])}")
        lines.append(",".join(columns))
        for r in rows:
            lines.append(",".join(_fmt(v) for v in r))
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def read_output(path: str) -> dict:
    """Round-trip parser for both output formats."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        data.setdefault("extras", {})
        return data
    config, extras, columns, rows = {}, {}, None, []
    for line in text.splitlines():
        if line.startswith("# config:"):
            config = json.loads(line.split(":", 1)[1])
        elif line.startswith("# "):
            k, v = line[2:].split("=", 1)
            try:
                extras[k.strip()] = float(v)
            except ValueError:
                extras[k.strip()] = v.strip()
        elif columns is None:
            columns = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    return {"config": config, "extras": extras, "columns": columns,
            "rows": rows}


def _centers(edges):
    e = np.asarray(edges)
    return 0.5 * (e[1:] + e[:-1])


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_density(args) -> int:
    params = ModelParams(args.p, args.s, args.alpha)
    config = {"command": "density", "p": args.p, "s": args.s,
              "alpha": args.alpha, "grid_r": args.grid_r,
              "grid_theta": args.grid_theta, "format": args.format}
    if params.on_axis:
        half = parse_grid(args.grid_r)
        ys = sorted(set([-v for v in half] + list(half)))
        rows = [(y, density_axis(params, y)) for y in ys]
        # Riemann check on a wide uniform grid
        yy = np.linspace(-60.0, 60.0, 6001)
        f = np.array([density_axis(params, float(y)) for y in yy])
        riemann = float(0.5 * np.sum((f[1:] + f[:-1]) * np.diff(yy)))
        write_output(args.out, config, ("y", "density"), rows, args.format,
                     {"normalization_check": riemann})
        return 0
    r_edges = np.asarray(parse_grid(args.grid_r))
    n_theta = int(args.grid_theta) if ":" not in str(args.grid_theta) \
        and "," not in str(args.grid_theta) else len(parse_grid(args.grid_theta))
    a = abs(params.alpha)
    th_edges = np.linspace(-a, a, n_theta + 1)
    rc, tc = _centers(r_edges), _centers(th_edges)
    rows = []
    mass = 0.0
    for i, r in enumerate(rc):
        f = _cone_density_grid(params, np.full_like(tc, r), tc)
        dr = r_edges[i + 1] - r_edges[i]
        for j, th in enumerate(tc):
            rows.append((float(r), float(th), float(f[j])))
            mass += float(f[j]) * r * dr * (th_edges[j + 1] - th_edges[j])
    write_output(args.out, config, ("r", "theta", "density"), rows,
                 args.format, {"normalization_check": mass})
    return 0


def cmd_lyapunov(args) -> int:
    ps = parse_grid(args.p_grid)
    ss = parse_grid(args.s_grid)
    alphas = parse_grid(args.alpha_grid)
    config = {"command": "lyapunov", "p": args.p_grid, "s": args.s_grid,
              "alpha": args.alpha_grid, "pade_order": args.pade_order,
              "format": args.format}
    L = M = args.pade_order // 2
    rows = []
    for p in ps:
        for alpha in alphas:
            series = small_s_series(ModelParams(p, 1.0, alpha),
                                    args.pade_order + 1)
            for s in ss:
                params = ModelParams(p, s, alpha)
                lam = lyapunov_exact(params).value
                lam_small = asympt_small_s(params, 5)[1].value
                lam_large = asympt_large_s(params, 1)[1].value
                try:
                    lam_pade = pade_resum(series, s, L, M).value
                except NumericsError:
                    lam_pade = math.nan
                rows.append((p, s, alpha, lam, lam_small, lam_large, lam_pade,
                             int(s <= SMALL_S_LIMIT), int(s >= LARGE_S_LIMIT)))
    write_output(args.out, config,
                 ("p", "s", "alpha", "lambda_exact", "lambda_small_s",
                  "lambda_large_s", "lambda_pade", "small_s_applicable",
                  "large_s_applicable"), rows, args.format)
    return 0


def cmd_simulate(args) -> int:
    params = ModelParams(args.p, args.s, args.alpha)
    stream = RngStream(args.seed)
    config = {"command": "simulate", "p": args.p, "s": args.s,
              "alpha": args.alpha, "n": args.n, "burn_in": args.burn_in,
              "seed": args.seed, "format": args.format}
    if params.on_axis:
        half = parse_grid(args.grid_r)
        edges = sorted(set([-v for v in half] + [0.0] + list(half)))
        hist = empirical_measure(params, args.n, args.burn_in,
                                 AxisGrid(tuple(edges)), stream)
        cols = ("bin_lo", "bin_hi", "mass")
    else:
        r_edges = parse_grid(args.grid_r)
        n_theta = int(args.grid_theta)
        a = abs(params.alpha)
        th_edges = [float(v) for v in np.linspace(-a, a, n_theta + 1)]
        hist = empirical_measure(params, args.n, args.burn_in,
                                 ConeGrid(tuple(r_edges), tuple(th_edges)),
                                 stream)
        cols = ("r_lo", "r_hi", "theta_lo", "theta_hi", "mass")
    write_output(args.out, config, cols, list(hist.rows()), args.format,
                 {"metadata": json.dumps(hist.metadata(), sort_keys=True)}
                 if args.format == "csv" else hist.metadata())
    return 0


def cmd_schrodinger(args) -> int:
    ps = parse_grid(args.p_grid)
    ss = parse_grid(args.s_grid)
    config = {"command": "schrodinger", "p": args.p_grid, "s": args.s_grid,
              "n": args.n, "seed": args.seed, "format": args.format}
    rows = []
    for i, p in enumerate(ps):
        for j, s in enumerate(ss):
            rate = localization_rate(p, s).rate
            est = wavefunction_growth(p, s, args.n,
                                      RngStream(args.seed, i * len(ss) + j))
            rows.append((p, s, rate, est.value, est.std_error))
    write_output(args.out, config,
                 ("p", "s", "rate", "mc_slope", "mc_stderr"), rows,
                 args.format)
    return 0


def cmd_pade(args) -> int:
    t = complex(args.t_re, args.t_im)
    stream = RngStream(args.seed)
    config = {"command": "pade", "p": args.p, "sigma": args.sigma,
              "t_re": args.t_re, "t_im": args.t_im, "n_max": args.n_max,
              "reps": args.reps, "seed": args.seed, "format": args.format}
    est = rate_estimate(args.p, args.sigma, t, args.n_max, args.reps, stream)
    s_m, a_m = map_to_ray_parameters(args.p, args.sigma, t)
    target = -2.0 * lyapunov_exact(ModelParams(args.p, s_m, a_m)).value
    n_lo, n_hi = args.n_max // 2, args.n_max
    acc = np.zeros(n_hi - n_lo + 1)
    for i, sub in enumerate(stream.split(args.reps)):
        draw = StieltjesDraw.sample(args.p, args.sigma,
                                    PROXY_FACTOR * args.n_max, sub)
        acc += log_errors(draw, t, n_lo, n_hi, PROXY_FACTOR * args.n_max)
    acc /= args.reps
    rows = [(n, float(v)) for n, v in zip(range(n_lo, n_hi + 1), acc)]
    write_output(args.out, config, ("n", "mean_ln_error"), rows, args.format,
                 {"fitted_slope": est.value, "slope_std_error": est.std_error,
                  "target_rate": target})
    return 0


def cmd_verify(args) -> int:
    report = verify_mod.run_all(seed=args.seed,
                                inject_fault=args.inject_fault,
                                with_timings=args.timings)
    verify_mod.validate_report(report)
    text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for check in report["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{status} {check['name']}", file=sys.stderr)
    return 0 if report["all_passed"] else 1


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rmprod",
        description="invariant measures and Lyapunov exponents of random "
                    "SL(2,C) matrix products with gamma entries on a ray")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    common = dict(format=lambda sp: sp.add_argument(
        "--format", choices=("csv", "json"), default="csv"),
        out=lambda sp: sp.add_argument("--out", default=None,
                                       help="output path (default stdout)"))

    sp = sub.add_parser("density", help="tabulate the invariant density")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--grid-r", default="0.05:8:60",
                    help="r bin edges lo:hi:n (axis case: positive-y half)")
    sp.add_argument("--grid-theta", default="40",
                    help="number of theta bins across the cone")
    common["format"](sp), common["out"](sp)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("lyapunov", help="exponent grid with asymptotics")
    sp.add_argument("--p", dest="p_grid", default="1")
    sp.add_argument("--s", dest="s_grid", default="0.1:4:40")
    sp.add_argument("--alpha", dest="alpha_grid", default="0")
    sp.add_argument("--pade-order", type=int, default=21,
                    help="series order feeding the [m/m] Pade column")
    common["format"](sp), common["out"](sp)
    sp.set_defaults(func=cmd_lyapunov)

    sp = sub.add_parser("simulate", help="chain histogram vs the density")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--n", type=int, default=1_000_000)
    sp.add_argument("--burn-in", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--grid-r", default="0.05:6:40")
    sp.add_argument("--grid-theta", default="20")
    common["format"](sp), common["out"](sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("schrodinger",
                        help="localization rate vs wavefunction growth")
    sp.add_argument("--p", dest="p_grid", default="1")
    sp.add_argument("--s", dest="s_grid", default="1")
    sp.add_argument("--n", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    common["format"](sp), common["out"](sp)
    sp.set_defaults(func=cmd_schrodinger)

    sp = sub.add_parser("pade", help="Stieltjes convergent error rate")
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--t-re", type=float, default=1.0)
    sp.add_argument("--t-im", type=float, default=0.0)
    sp.add_argument("--n-max", type=int, default=200)
    sp.add_argument("--reps", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    common["format"](sp), common["out"](sp)
    sp.set_defaults(func=cmd_pade)

    sp = sub.add_parser("verify", help="run the full verification suite")
    sp.add_argument("--seed", type=int, default=12345)
    sp.add_argument("--out", default=None, help="report path (default stdout)")
    sp.add_argument("--timings", action="store_true",
                    help="include wall-clock timings (non-deterministic)")
    sp.add_argument("--inject-fault", default=None,
                    choices=("normalization",),
                    help="self-test: perturb a quantity so a check must fail")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        path = getattr(exc, "filename", None) or getattr(args, "out", None)
        print(f"i/o failure on {path!r}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
