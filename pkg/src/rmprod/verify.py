"""Full numerical verification suite: every closed-form result is checked
against an independent route (quadrature of the defining integrals, Monte
Carlo of the underlying chain, or a structurally different recurrence).

Each check returns {name, passed, details}; the runner never short-circuits,
and the report validates against the bundled JSON schema.
"""

from __future__ import annotations

import cmath
import importlib.resources
import json
import math
import time

import numpy as np

from . import __version__
from .bessel import (MacdonaldIndex, bessel_k, digamma,
                     macdonald_integral_quadrature)
from .exceptions import NumericsError
from .lyapunov import (asympt_small_s, axis_density_series, axis_series_layers,
                       lyapunov_exact, lyapunov_integer, lyapunov_from_measure,
                       small_s_coefficients)
from .measure import (ConePoint, InvariantMeasure, ModelParams, axis_integrate,
                      axis_stationary_residual, cone_integrate, density_axis,
                      gig_integrate, stationary_residual)
from .schrodinger import localization_rate, wavefunction_growth
from .simulate import RngStream, furstenberg_estimate, iterate_chain
from .stieltjes import map_to_ray_parameters, rate_estimate

SCHEMA_VERSION = 1

CONE_GRID = [(p, s, a)
             for p in (0.5, 1.0, 2.5)
             for s in (0.5, 1.0, 2.0)
             for a in (math.pi / 20, math.pi / 6, math.pi / 3,
                       9 * math.pi / 20)]
PS_GRID = [(p, s) for p in (0.5, 1.0, 2.5) for s in (0.5, 1.0, 2.0)]

MC_TRIPLES = [(1.0, 1.0, 0.0), (1.0, 1.0, math.pi / 6),
              (1.0, 1.0, math.pi / 2), (2.0, 0.5, math.pi / 2),
              (2.0, 0.5, math.pi / 3), (0.5, 2.0, 0.0)]


def check_normalization(seed: int, fault: str | None = None) -> dict:
    """Criterion 1: unit mass of every density, cone grid + axis cases."""
    start = time.monotonic()
    bump = 1.01 if fault == "normalization" else 1.0
    worst = 0.0
    for p, s, a in CONE_GRID:
        mass = bump * cone_integrate(ModelParams(p, s, a))
        worst = max(worst, abs(mass - 1.0))
    for p, s in PS_GRID:
        mass = bump * axis_integrate(p, s, lambda y: 1.0)
        worst = max(worst, abs(mass - 1.0))
    elapsed = time.monotonic() - start
    runtime_ok = elapsed < 60.0
    return {"name": "normalization", "passed": worst <= 1e-6 and runtime_ok,
            "details": {"worst_mass_deviation": worst, "tolerance": 1e-6,
                        "cases": len(CONE_GRID) + len(PS_GRID),
                        "runtime_under_60s": runtime_ok}}


def check_lyapunov_agreement(seed: int, fault: str | None = None) -> dict:
    """Criterion 2: exact vs measure-quadrature vs integer closed form."""
    worst_meas = 0.0
    for p, s, a in CONE_GRID:
        params = ModelParams(p, s, a)
        ex = lyapunov_exact(params).value
        qm = lyapunov_from_measure(InvariantMeasure(params)).value
        worst_meas = max(worst_meas, abs(ex - qm))
    for p, s in PS_GRID:
        params = ModelParams(p, s, math.pi / 2)
        ex = lyapunov_exact(params).value
        qm = lyapunov_from_measure(InvariantMeasure(params)).value
        worst_meas = max(worst_meas, abs(ex - qm))
    worst_int = 0.0
    alphas = (math.pi / 20, math.pi / 6, math.pi / 3, 9 * math.pi / 20,
              math.pi / 2)
    for n in range(1, 6):
        for s in (0.5, 1.0, 2.0):
            for a in alphas:
                ex = lyapunov_exact(ModelParams(float(n), s, a)).value
                cf = lyapunov_integer(n, s, a).value
                worst_int = max(worst_int, abs(ex - cf))
    return {"name": "lyapunov_triple_agreement",
            "passed": worst_meas < 1e-6 and worst_int < 1e-9,
            "details": {"worst_measure_route": worst_meas,
                        "tol_measure": 1e-6,
                        "worst_integer_route": worst_int,
                        "tol_integer": 1e-9}}


def check_monte_carlo_closure(seed: int, fault: str | None = None) -> dict:
    """Criterion 3: Furstenberg estimator within 4 SE of the exact value."""
    rows = []
    ok = True
    for i, (p, s, a) in enumerate(MC_TRIPLES):
        t0 = time.monotonic()
        est = furstenberg_estimate(ModelParams(p, s, a), 1_000_000,
                                   RngStream(seed, 100 + i))
        lam = lyapunov_exact(ModelParams(p, s, a)).value
        dt = time.monotonic() - t0
        dev = abs(est.value - lam)
        good = (dev <= 4.0 * est.std_error and est.std_error < 5e-3
                and dt < 30.0)
        ok = ok and good
        rows.append({"p": p, "s": s, "alpha": a, "estimate": est.value,
                     "std_error": est.std_error, "exact": lam,
                     "sigmas": dev / est.std_error if est.std_error else 0.0,
                     "runtime_under_30s": dt < 30.0, "passed": good})
    return {"name": "monte_carlo_closure", "passed": ok,
            "details": {"triples": rows, "n": 1_000_000}}


def check_small_s_generator(seed: int, fault: str | None = None) -> dict:
    """Criterion 4: generator reproduces the hard-coded l_1..l_5 table."""
    worst_rel = 0.0
    worst_axis = 0.0
    for p in (1.0, 2.0, 3.5):
        gen = small_s_coefficients(p, 5)
        for alpha in (0.0, math.pi / 4, math.pi / 2):
            series, _ = asympt_small_s(ModelParams(p, 0.1, alpha), 5)
            for n in range(1, 6):
                g = gen[n - 1] * math.cos(n * alpha)
                tab = series.coeffs[n]
                if alpha == math.pi / 2 and n % 2 == 1:
                    worst_axis = max(worst_axis, abs(g))
                elif tab != 0.0:
                    worst_rel = max(worst_rel, abs(g - tab) / abs(tab))
    return {"name": "small_s_coefficients",
            "passed": worst_rel < 1e-10 and worst_axis < 1e-12,
            "details": {"worst_relative": worst_rel,
                        "worst_axis_odd_term": worst_axis}}


def check_large_s_law(seed: int, fault: str | None = None) -> dict:
    """Criterion 5: lambda - ln s - psi(3) matches cos(2a)/((p-1)^2 s^2)."""
    p, s = 3.0, 1000.0
    rows = []
    ok = True
    for alpha in (0.0, math.pi / 3):
        lam = lyapunov_exact(ModelParams(p, s, alpha)).value
        term = math.cos(2 * alpha) / ((p - 1.0) ** 2 * s * s)
        resid = abs(lam - math.log(s) - digamma(p) - term)
        bound = 0.3 * abs(term) if term != 0.0 else 1e-7
        good = resid < bound
        ok = ok and good
        rows.append({"alpha": alpha, "residual": resid, "bound": bound,
                     "passed": good})
    return {"name": "large_s_law", "passed": ok, "details": {"cases": rows}}


def check_weak_limits(seed: int, fault: str | None = None) -> dict:
    """Criterion 6: cone expectations converge to the GIG (alpha -> 0) and
    axis (alpha -> pi/2) expectations, shrinking >= 5x per decade."""
    p = s = 1.0
    tests = {
        "exp_abs": (lambda r, th: np.exp(-r), lambda x: np.exp(-x),
                    lambda y: math.exp(-abs(y))),
        "inv_sq": (lambda r, th: 1.0 / (1.0 + r * r),
                   lambda x: 1.0 / (1.0 + x * x),
                   lambda y: 1.0 / (1.0 + y * y)),
    }
    rows = []
    ok = True
    for name, (g_cone, g_gig, g_axis) in tests.items():
        ref0 = gig_integrate(p, s, g_gig)
        d2 = abs(cone_integrate(ModelParams(p, s, 1e-2), g_cone) - ref0)
        d3 = abs(cone_integrate(ModelParams(p, s, 1e-3), g_cone) - ref0)
        good0 = d3 < 1e-2 and d2 >= 5.0 * d3
        ref_ax = axis_integrate(p, s, g_axis)
        e2 = abs(cone_integrate(ModelParams(p, s, math.pi / 2 - 1e-2),
                                g_cone) - ref_ax)
        e3 = abs(cone_integrate(ModelParams(p, s, math.pi / 2 - 1e-3),
                                g_cone) - ref_ax)
        good1 = e3 < 1e-2 and e2 >= 5.0 * e3
        ok = ok and good0 and good1
        rows.append({"test_function": name,
                     "to_gig": {"delta_1e-2": d2, "delta_1e-3": d3,
                                "passed": good0},
                     "to_axis": {"delta_1e-2": e2, "delta_1e-3": e3,
                                 "passed": good1}})
    return {"name": "weak_limits", "passed": ok, "details": {"cases": rows}}


def check_fixed_point_residuals(seed: int, fault: str | None = None) -> dict:
    """Criterion 7: stationarity defect of the densities at random interior
    points (validates the closed forms directly against the fixed-point
    equation of the chain)."""
    gen = np.random.default_rng([seed, 7])
    cone_sets = [(1.0, 1.0, math.pi / 6), (3.0, 0.5, math.pi / 3),
                 (2.0, 2.0, math.pi / 4), (0.7, 1.0, 9 * math.pi / 20)]
    axis_sets = [(1.0, 1.0), (2.0, 0.5), (0.5, 1.0), (3.0, 1.0)]
    worst_cone = 0.0
    for p, s, a in cone_sets:
        params = ModelParams(p, s, a)
        for _ in range(20):
            r = float(gen.uniform(0.3, 3.0))
            th = float(gen.uniform(-0.9, 0.9) * a)
            worst_cone = max(worst_cone, stationary_residual(
                params, ConePoint(r, th)))
    worst_axis = 0.0
    for p, s in axis_sets:
        params = ModelParams(p, s, math.pi / 2)
        for _ in range(20):
            y = float(gen.uniform(0.1, 4.0) * gen.choice([-1.0, 1.0]))
            worst_axis = max(worst_axis, axis_stationary_residual(params, y))
    return {"name": "fixed_point_residuals",
            "passed": worst_cone < 1e-6 and worst_axis < 1e-6,
            "details": {"worst_cone": worst_cone, "worst_axis": worst_axis,
                        "tolerance": 1e-6}}


def check_macdonald_identities(seed: int, fault: str | None = None) -> dict:
    """Criterion 8: direct quadrature of the parametric integral matches
    Macdonald's factorization (n = -1) and the cross-product form (n = 0)."""
    gen = np.random.default_rng([seed, 8])
    worst_fact = 0.0
    worst_cross = 0.0
    for _ in range(10):
        p = float(gen.uniform(0.3, 3.0))
        ru, rv = gen.uniform(0.8, 2.5, size=2)
        au, av = gen.uniform(-0.6, 0.6, size=2)  # keeps Re(uv) > 0 safely
        u = ru * cmath.exp(1j * au)
        v = rv * cmath.exp(1j * av)
        kpu, kpv = bessel_k(p, u), bessel_k(p, v)
        kp1u, kp1v = bessel_k(p + 1, u), bessel_k(p + 1, v)
        prod = kpu * kpv
        i_m1 = macdonald_integral_quadrature(MacdonaldIndex(p, -1, u, v))
        worst_fact = max(worst_fact, abs(i_m1 - prod) / abs(prod))
        cross = u * kp1u * kpv + v * kp1v * kpu - 2.0 * p * prod
        i_0 = macdonald_integral_quadrature(MacdonaldIndex(p, 0, u, v))
        worst_cross = max(worst_cross, abs(i_0 - cross) / abs(cross))
    return {"name": "macdonald_identities",
            "passed": worst_fact < 1e-8 and worst_cross < 1e-8,
            "details": {"worst_factorization": worst_fact,
                        "worst_cross_product": worst_cross,
                        "tolerance": 1e-8}}


def _mean_variance_formulas(params: ModelParams):
    zb = 2.0 * cmath.exp(-1j * params.alpha) / params.s
    ratio = bessel_k(params.p - 1.0, zb) / bessel_k(params.p, zb)
    mean = ratio
    var = params.s / math.sin(2.0 * params.alpha) \
        * (cmath.exp(1j * params.alpha) * ratio).imag
    return mean, var


def check_chain_moments(seed: int, fault: str | None = None) -> dict:
    """Criterion 9: chain mean and variance vs the closed formulas."""
    rows = []
    ok = True
    for i, (p, s, a) in enumerate([(1.0, 1.0, math.pi / 6),
                                   (2.0, 0.5, math.pi / 3)]):
        params = ModelParams(p, s, a)
        res = iterate_chain(params, None, 1_000_000,
                            RngStream(seed, 900 + i), burn_in=1000)
        traj = res.trajectory
        mean_f, var_f = _mean_variance_formulas(params)
        batches = traj[:traj.size - traj.size % 50].reshape(50, -1)
        bm = batches.mean(axis=1)
        bv = (np.abs(batches) ** 2).mean(axis=1) - np.abs(bm) ** 2
        se_re = float(np.std(bm.real, ddof=1) / math.sqrt(50))
        se_im = float(np.std(bm.imag, ddof=1) / math.sqrt(50))
        se_v = float(np.std(bv, ddof=1) / math.sqrt(50))
        mc_mean = complex(traj.mean())
        mc_var = float((np.abs(traj) ** 2).mean() - abs(mc_mean) ** 2)
        good = (abs(mc_mean.real - mean_f.real) <= 4 * se_re
                and abs(mc_mean.imag - mean_f.imag) <= 4 * se_im
                and abs(mc_var - var_f) <= 4 * se_v)
        ok = ok and good
        rows.append({"p": p, "s": s, "alpha": a,
                     "mean_mc": [mc_mean.real, mc_mean.imag],
                     "mean_formula": [mean_f.real, mean_f.imag],
                     "var_mc": mc_var, "var_formula": var_f,
                     "se": [se_re, se_im, se_v], "passed": good})
    return {"name": "chain_moments", "passed": ok, "details": {"cases": rows}}


def check_schrodinger_closure(seed: int, fault: str | None = None) -> dict:
    """Criterion 10: wavefunction growth slope vs the closed-form rate."""
    rows = []
    ok = True
    for i, (p, s) in enumerate([(1.0, 1.0), (2.0, 0.5)]):
        est = wavefunction_growth(p, s, 1_000_000, RngStream(seed, 1000 + i))
        rate = localization_rate(p, s).rate
        good = abs(est.value - rate) <= 4.0 * est.std_error
        ok = ok and good
        rows.append({"p": p, "s": s, "slope": est.value,
                     "std_error": est.std_error, "rate": rate,
                     "passed": good})
    return {"name": "schrodinger_closure", "passed": ok,
            "details": {"cases": rows, "n": 1_000_000}}


def check_pade_rate(seed: int, fault: str | None = None) -> dict:
    """Criterion 11: measured convergent error slope within 5% of -2 lambda
    at the mapped parameters."""
    rows = []
    ok = True
    for i, t in enumerate([1.0 + 0.0j, 1.0j]):
        est = rate_estimate(1.0, 1.0, t, 200, 20, RngStream(seed, 1100 + i))
        s_m, a_m = map_to_ray_parameters(1.0, 1.0, t)
        target = -2.0 * lyapunov_exact(ModelParams(1.0, s_m, a_m)).value
        rel = abs(est.value - target) / abs(target)
        good = rel < 0.05
        ok = ok and good
        rows.append({"t": [t.real, t.imag], "slope": est.value,
                     "std_error": est.std_error, "target": target,
                     "relative_error": rel, "passed": good})
    return {"name": "pade_rate", "passed": ok, "details": {"cases": rows}}


def check_axis_series(seed: int, fault: str | None = None) -> dict:
    """Criterion 12: axis-series lambda estimate within 1%, and the layer
    support structure (odd layers n..4n-3, even layers n+1..4n-1)."""
    est = axis_density_series(1.0, 11).lyapunov(0.1).value
    exact = lyapunov_exact(ModelParams(1.0, 0.1, math.pi / 2)).value
    rel = abs(est - exact) / abs(exact)
    layers = axis_series_layers(1.7, 12)
    structure_ok = True
    for n in range(1, 7):
        odd = layers[2 * n - 1]
        if not all(n <= k <= 4 * n - 3 for k in odd):
            structure_ok = False
        even = layers[2 * n] if 2 * n <= 12 else {}
        if not all(n + 1 <= k <= 4 * n - 1 for k in even):
            structure_ok = False
    return {"name": "axis_series", "passed": rel < 1e-2 and structure_ok,
            "details": {"estimate": est, "exact": exact,
                        "relative_error": rel,
                        "structure_ok": structure_ok}}


def check_cauchy_limit(seed: int, fault: str | None = None) -> dict:
    """Criterion 13: the normalized axis density approaches the Cauchy law,
    the uniform deviation on |y| <= 5 halving from s = 0.2 to s = 0.1."""
    p = 1.0
    ys = np.linspace(-5.0, 5.0, 50)

    def deviation(s):
        params = ModelParams(p, s, math.pi / 2)
        return max(abs(density_axis(params, float(y)) * math.pi
                       * (1.0 + y * y) - 1.0) for y in ys)

    d02, d01 = deviation(0.2), deviation(0.1)
    good = d01 <= 0.5 * d02
    return {"name": "cauchy_limit", "passed": good,
            "details": {"deviation_s_0.2": d02, "deviation_s_0.1": d01,
                        "ratio": d01 / d02}}


ALL_CHECKS = [
    check_normalization,
    check_lyapunov_agreement,
    check_monte_carlo_closure,
    check_small_s_generator,
    check_large_s_law,
    check_weak_limits,
    check_fixed_point_residuals,
    check_macdonald_identities,
    check_chain_moments,
    check_schrodinger_closure,
    check_pade_rate,
    check_axis_series,
    check_cauchy_limit,
]


def _jsonable(obj):
    """Recursively coerce numpy scalars so the report is plain JSON."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def run_all(seed: int = 12345, inject_fault: str | None = None,
            with_timings: bool = False) -> dict:
    """Run every check (never short-circuiting) and assemble the report."""
    checks = []
    timings = {}
    for fn in ALL_CHECKS:
        t0 = time.monotonic()
        try:
            result = fn(seed, inject_fault)
        except NumericsError as exc:
            result = {"name": fn.__name__.removeprefix("check_"),
                      "passed": False, "details": {"error": str(exc)}}
        timings[result["name"]] = time.monotonic() - t0
        checks.append(_jsonable(result))
    report = {
        "schema_version": SCHEMA_VERSION,
        "package_version": __version__,
        "seed": seed,
        "injected_fault": inject_fault,
        "all_passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
    if with_timings:
        report["timings_seconds"] = {k: round(v, 3)
                                     for k, v in timings.items()}
    return report


def load_schema() -> dict:
    ref = importlib.resources.files("rmprod").joinpath("verify_schema.json")
    return json.loads(ref.read_text())


def validate_report(report: dict):
    """Raise jsonschema.ValidationError if the report is malformed."""
    import jsonschema

    jsonschema.validate(report, load_schema())
