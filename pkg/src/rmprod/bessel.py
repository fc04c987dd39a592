"""Modified Bessel machinery for real order and complex argument.

Everything is built on the integral representation

    K_p(z) = (1/2) \\int_0^\\infty t^{-p-1} exp{-(z/2)(t + 1/t)} dt,   Re z > 0,

mapped by t = e^tau to a doubly-exponentially decaying integrand on the real
line and summed by the trapezoidal rule with step halving.  On the imaginary
axis the representation stops converging; there K_p(i x) is evaluated through
(J_p, Y_p) via

    K_p(i x) = -(i pi / 2) e^{-i p pi / 2} [J_p(x) - i Y_p(x)],   x > 0,

an identity that holds for every real order (checked here against an
epsilon-continuation of the half-plane representation, see
:func:`bessel_k_eps_continuation`).

Internally values are carried as (y, ell) pairs with K = y * exp(ell) so that
ratios of Bessel functions remain accurate when K itself over- or underflows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (ConsistencyError, DegenerateRecurrenceError,
                         DomainError)
from .quadrature import QuadratureConfig, default_config, refine_trapezoid

ORDER_MAX = 64.0
ABS_Z_MIN = 1e-6
ABS_Z_MAX = 1e6


def _check_domain(p: float, z: complex) -> complex:
    z = complex(z)
    if abs(z.real) < 1e-12 * abs(z):
        # snap arguments that are imaginary up to round-off (e.g. built from
        # a floating pi/2) onto the axis branch
        z = complex(0.0, z.imag)
    if not (0.0 <= p <= ORDER_MAX):
        raise DomainError(f"order p={p} outside [0, {ORDER_MAX}]")
    if not (ABS_Z_MIN <= abs(z) <= ABS_Z_MAX):
        raise DomainError(f"|z|={abs(z)} outside [{ABS_Z_MIN}, {ABS_Z_MAX}]")
    if z.real < 0.0 or (z.real == 0.0 and z.imag == 0.0):
        raise DomainError("argument must satisfy Re z > 0, or lie on the "
                          "imaginary axis with z != 0")
    return z


def _truncation(p: float, x: float, cfg: QuadratureConfig) -> float:
    # smallest T with x*(cosh T - 1) - |p| T >= L
    L = -math.log(min(cfg.rel_tol, cfg.abs_tol)) + 30.0
    T = 4.0
    for _ in range(80):
        T_new = max(4.0, math.acosh(1.0 + (L + abs(p) * T) / x))
        if abs(T_new - T) < 1e-3:
            break
        T = T_new
    return T_new


def _k_core(p: float, z: complex, cfg: QuadratureConfig, weight_tau=False):
    """(y, ell) with value = y * exp(ell), for K_p(z) or, with
    ``weight_tau``, for d/dp K_p(z).  Requires Re z > 0."""
    p = abs(p)
    x = z.real
    T = _truncation(p, x, cfg)
    # peak of the real exponent -p*tau - x*(cosh tau - 1)
    tau_star = -math.asinh(p / x) if p > 0 else 0.0
    peak = -p * tau_star - x * (math.cosh(tau_star) - 1.0)

    def f(tau):
        ex = -p * tau - x * (np.cosh(tau) - 1.0) - peak
        val = np.exp(ex) * np.exp(-1j * z.imag * (np.cosh(tau) - 1.0))
        if weight_tau:
            val = -tau * val
        return val

    est = refine_trapezoid(f, -T, T, cfg, h0=0.5, scale=None)
    y = 0.5 * est * cmath.exp(complex(0.0, -z.imag))
    return y, peak - x


def _jy_core(p: float, w: complex, cfg: QuadratureConfig):
    """(J_p(w), Y_p(w)) for Re w > 0 (complex w near the positive real axis)
    via the standard integral representations: an oscillatory integral over
    [0, pi] plus exponentially decaying tails."""
    x = w.real
    # finite part: composite 16-point Gauss-Legendre, panels tracking the
    # oscillation scale |w|
    npan = max(12, int(math.ceil(0.8 * abs(w))) + 12)
    nodes, weights = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(0.0, math.pi, npan + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * np.diff(edges)[:, None]
    th = (mid + half * nodes[None, :]).ravel()
    wt = (half * np.broadcast_to(weights, (npan, 16))).ravel()
    arg = w * np.sin(th) - p * th
    j_fin = complex(np.sum(wt * np.cos(arg))) / math.pi
    y_fin = complex(np.sum(wt * np.sin(arg))) / math.pi
    # tails: substitute t = e^u so the trapezoid rule converges geometrically
    L = -math.log(min(cfg.rel_tol, cfg.abs_tol)) + 25.0
    T = 3.0
    for _ in range(80):
        T = math.asinh((L + p * T) / x)
    U = math.log(max(T, 1.0))

    def tail(g):
        return refine_trapezoid(
            lambda u: g(np.exp(u)) * np.exp(u), -40.0, U, cfg, h0=0.5)

    sin_pp = math.sin(p * math.pi)
    j_tail = 0.0
    if abs(sin_pp) > 1e-18:
        j_tail = sin_pp / math.pi * tail(
            lambda t: np.exp(-w * np.sinh(t) - p * t))
    cos_pp = math.cos(p * math.pi)
    y_tail = tail(lambda t: (np.exp(p * t) + np.exp(-p * t) * cos_pp)
                  * np.exp(-w * np.sinh(t))) / math.pi
    J = j_fin - complex(j_tail)
    Y = y_fin - complex(y_tail)
    if not (cmath.isfinite(J) and cmath.isfinite(Y)):
        raise DomainError(f"J_p/Y_p overflow at p={p}, w={w}")
    return J, Y


def bessel_jy(p: float, x: float, cfg: QuadratureConfig | None = None):
    """(J_p(x), Y_p(x)) for real x > 0."""
    cfg = cfg or default_config()
    if x <= 0:
        raise DomainError("bessel_jy requires x > 0")
    if not (0.0 <= p <= ORDER_MAX):
        raise DomainError(f"order p={p} outside [0, {ORDER_MAX}]")
    J, Y = _jy_core(p, complex(x), cfg)
    return J.real, Y.real


# direct half-plane quadrature degrades once the argument leans this close
# to the imaginary axis; switch to the rotated Hankel route there
_AXIS_SECTOR = 0.1
_HANKEL_IM_MAX = 600.0


def _k_near_axis(p: float, z: complex, cfg: QuadratureConfig) -> complex:
    """K_p(z) for z in the upper near-axis sector (Re z >= 0 small) through
    K_p(z) = -(i pi/2) e^{-i p pi/2} [J_p - i Y_p](-i z), the rotation that
    maps the sector onto the right neighborhood of the positive real axis.
    Reduces to the classical (J, Y) identity when z is purely imaginary.
    """
    w = complex(z.imag, -z.real)  # -i z, Re w > 0
    if abs(w.imag) > _HANKEL_IM_MAX:
        raise DomainError("near-axis argument too large for the Hankel route")
    J, Y = _jy_core(abs(p), w, cfg)
    return -0.5j * math.pi * cmath.exp(-0.5j * abs(p) * math.pi) * (J - 1j * Y)


def bessel_k_logscaled(p: float, z: complex,
                       cfg: QuadratureConfig | None = None):
    """(y, ell) with K_p(z) = y * exp(ell); the pair stays representable
    even when K itself would over- or underflow."""
    cfg = cfg or default_config()
    z = _check_domain(abs(p), complex(z))
    if z.imag < 0.0:
        y, ell = bessel_k_logscaled(p, z.conjugate(), cfg)
        return y.conjugate(), ell
    if z.real < _AXIS_SECTOR * abs(z):
        return _k_near_axis(p, z, cfg), 0.0
    return _k_core(p, z, cfg)


def bessel_k(p: float, z: complex, cfg: QuadratureConfig | None = None) -> complex:
    """K_p(z) for real order p >= 0; Re z > 0 or z on the punctured
    imaginary axis.  Satisfies K_p(conj z) = conj K_p(z) exactly as computed.
    """
    y, ell = bessel_k_logscaled(p, z, cfg)
    if ell > 700.0:
        raise DomainError(f"K_{p}({z}) exceeds double-precision range")
    return y * math.exp(ell)


def _dorder_fd(p: float, z: complex, cfg: QuadratureConfig) -> complex:
    # 5-point central difference in the order
    h = 1e-5 * max(1.0, p)
    if p < 2.0 * h:
        h = 0.25 * p if p > 0 else 1e-5
    vals = [bessel_k(p + m * h, z, cfg) for m in (-2, -1, 1, 2)]
    return (vals[0] - 8.0 * vals[1] + 8.0 * vals[2] - vals[3]) / (12.0 * h)


def bessel_k_dorder(p: float, z: complex,
                    cfg: QuadratureConfig | None = None) -> complex:
    """d/dp K_p(z).

    Integer p uses the closed-form finite sum over lower orders; non-integer
    p differentiates under the integral sign and cross-checks against a
    5-point central difference in the order (ConsistencyError when the two
    routes disagree beyond 10 * rel_tol).
    """
    cfg = cfg or default_config()
    z = _check_domain(abs(p), complex(z))
    if z.imag < 0.0:
        return bessel_k_dorder(p, z.conjugate(), cfg).conjugate()
    n = round(p)
    near_axis = z.real < _AXIS_SECTOR * abs(z)
    if abs(p - n) < 1e-12:
        if n == 0:
            return 0.0 + 0.0j
        if near_axis:
            ks = [_k_near_axis(k, z, cfg) for k in range(n + 1)]
            total = 0.0 + 0.0j
            for k in range(n):
                coeff = math.factorial(n) / (2.0 * (n - k) * math.factorial(k))
                total += coeff * (z / 2.0) ** (k - n) * ks[k]
            return total
        pairs = [_k_core(k, z, cfg) for k in range(n + 1)]
        total = 0.0 + 0.0j
        for k in range(n):
            coeff = math.factorial(n) / (2.0 * (n - k) * math.factorial(k))
            total += coeff * (z / 2.0) ** (k - n) * pairs[k][0] \
                * math.exp(pairs[k][1] - pairs[n][1])
        return total * math.exp(pairs[n][1])
    if near_axis:
        # the differentiated half-plane integral stops converging in the
        # near-axis sector; difference the Hankel-route values in the order
        return _dorder_fd(p, z, cfg)
    y, ell = _k_core(p, z, cfg, weight_tau=True)
    quad_val = y * math.exp(ell) if abs(ell) < 700.0 else None
    fd_val = _dorder_fd(p, z, cfg)
    if quad_val is None:
        return fd_val
    scale = max(abs(quad_val), abs(fd_val))
    if scale > 0 and abs(quad_val - fd_val) > 10.0 * max(cfg.rel_tol * scale,
                                                         cfg.abs_tol):
        raise ConsistencyError(
            f"d/dp K disagreement at p={p}, z={z}: "
            f"quadrature {quad_val} vs finite difference {fd_val}")
    return quad_val


def log_derivative_order(p: float, z: complex,
                         cfg: QuadratureConfig | None = None) -> complex:
    """Lambda_p(z) = d/dp ln K_p(z), computed so the scale factors cancel."""
    cfg = cfg or default_config()
    z = _check_domain(abs(p), complex(z))
    if z.imag < 0.0:
        return log_derivative_order(p, z.conjugate(), cfg).conjugate()
    n = round(p)
    near_axis = z.real < _AXIS_SECTOR * abs(z)
    if abs(p - n) < 1e-12:
        if n == 0:
            return 0.0 + 0.0j
        if near_axis:
            ks = [_k_near_axis(k, z, cfg) for k in range(n + 1)]
            ells = [0.0] * (n + 1)
        else:
            pairs = [_k_core(k, z, cfg) for k in range(n + 1)]
            ks = [yv for yv, _ in pairs]
            ells = [e for _, e in pairs]
        total = 0.0 + 0.0j
        for k in range(n):
            coeff = math.factorial(n) / (2.0 * (n - k) * math.factorial(k))
            total += coeff * (z / 2.0) ** (k - n) \
                * (ks[k] / ks[n]) * math.exp(ells[k] - ells[n])
        return total
    if near_axis:
        return _dorder_fd(p, z, cfg) / _k_near_axis(p, z, cfg)
    yk, ellk = _k_core(p, z, cfg)
    yd, elld = _k_core(p, z, cfg, weight_tau=True)
    return (yd / yk) * math.exp(elld - ellk)


def bessel_k_eps_continuation(p: float, x: float,
                              cfg: QuadratureConfig | None = None,
                              eps0: float = 0.35, levels: int = 9) -> complex:
    """K_p(i x), x > 0, by evaluating at z = x e^{i(pi/2 - eps)} and
    extrapolating eps -> 0 (Neville on a geometric eps sequence).

    Slower and less accurate than the (J, Y) identity route used by
    :func:`bessel_k`; kept as an independent cross-validation of the
    imaginary-axis values.
    """
    cfg = cfg or default_config()
    if x <= 0:
        raise DomainError("requires x > 0")
    eps = [eps0 * 0.5 ** j for j in range(levels)]
    tab = []
    for e in eps:
        z = x * cmath.exp(1j * (math.pi / 2 - e))
        y, ell = _k_core(p, z, cfg)
        tab.append(y * math.exp(ell))
    for j in range(1, levels):
        for i in range(levels - 1, j - 1, -1):
            tab[i] = tab[i] + (tab[i] - tab[i - 1]) / (eps[i - j] / eps[i] - 1.0)
    return tab[levels - 1]


def digamma(x: float) -> float:
    """psi(x) for x > 0: shift into x >= 6, then the asymptotic series."""
    if x <= 0:
        raise DomainError("digamma requires x > 0")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = (math.log(x) - 0.5 / x
              - inv2 * (1.0 / 12.0
                        - inv2 * (1.0 / 120.0
                                  - inv2 * (1.0 / 252.0
                                            - inv2 * (1.0 / 240.0
                                                      - inv2 * (1.0 / 132.0
                                                                - inv2 * 691.0 / 32760.0))))))
    return acc + series


# ---------------------------------------------------------------------------
# Macdonald-type integrals I_p^{(n)}(u, v)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MacdonaldIndex:
    """Index set (order p, power n, arguments u, v) for the parametric
    integral whose n = -1 value factorizes as K_p(u) K_p(v)."""

    p: float
    n: int
    u: complex
    v: complex

    def __post_init__(self):
        u, v = complex(self.u), complex(self.v)
        if abs(cmath.phase(u)) >= math.pi or abs(cmath.phase(v)) >= math.pi:
            raise DomainError("|arg u| and |arg v| must be < pi")
        if abs(cmath.phase(u + v)) >= math.pi / 4:
            raise DomainError("|arg(u+v)| must be < pi/4")
        if self.n <= -2 and u * u == v * v:
            raise DegenerateRecurrenceError(
                "backward recurrence needs u^2 != v^2")


def _apply_u_du(terms, p):
    out = {}

    def add(key, val):
        out[key] = out.get(key, 0.0) + val

    for (a, i, b, j, m), c in terms.items():
        add((a, i, b, j, m), c * (a + p + i))
        add((a + 1, i + 1, b, j, m), -c)
        if m:
            add((a + 2, i, b, j, m + 1), 2.0 * m * c)
    return out


def _apply_v_dv(terms, p):
    out = {}

    def add(key, val):
        out[key] = out.get(key, 0.0) + val

    for (a, i, b, j, m), c in terms.items():
        add((a, i, b, j, m), c * (b + p + j))
        add((a, i, b + 1, j + 1, m), -c)
        if m:
            add((a, i, b + 2, j, m + 1), -2.0 * m * c)
    return out


def _combine(*scaled):
    out = {}
    for fac, terms in scaled:
        for k, v in terms.items():
            out[k] = out.get(k, 0.0) + fac * v
    return {k: v for k, v in out.items() if v != 0.0}


def macdonald_terms(p: float, n: int):
    """Symbolic reduction of I_p^{(n)} to a combination of terms
    u^a v^b K_{p+i}(u) K_{p+j}(v) / (v^2 - u^2)^m, keyed (a, i, b, j, m).

    n = -1 is Macdonald's factorization; n >= 0 climbs with the forward
    recurrence (n = 0 reproduces the K-product cross identity); n <= -2
    descends with the backward recurrence.
    """
    terms = {(0, 0, 0, 0, 0): 1.0}
    m = -1
    while m < n:
        m += 1
        terms = _combine((2.0 * m, terms),
                         (-1.0, _apply_u_du(terms, p)),
                         (-1.0, _apply_v_dv(terms, p)))
    while m > n:
        diff = _combine((1.0, _apply_u_du(terms, p)),
                        (-1.0, _apply_v_dv(terms, p)))
        terms = {(a, i, b, j, mm + 1): c
                 for (a, i, b, j, mm), c in diff.items()}
        m -= 1
    return terms


def macdonald_integral(idx: MacdonaldIndex,
                       cfg: QuadratureConfig | None = None) -> complex:
    """I_p^{(n)}(u, v) via the closed reduction to products of K's."""
    cfg = cfg or default_config()
    u, v = complex(idx.u), complex(idx.v)
    terms = macdonald_terms(idx.p, idx.n)
    cache = {}

    def K(order, z):
        key = (order, z)
        if key not in cache:
            cache[key] = bessel_k(abs(order), z, cfg)
        return cache[key]

    denom = v * v - u * u
    total = 0.0 + 0.0j
    for (a, i, b, j, m), c in terms.items():
        term = c * u ** a * v ** b * K(idx.p + i, u) * K(idx.p + j, v)
        if m:
            term /= denom ** m
        total += term
    return total


def macdonald_integral_quadrature(idx: MacdonaldIndex,
                                  cfg: QuadratureConfig | None = None) -> complex:
    """Direct quadrature of the defining tau-integral (independent route,
    used to validate the recurrence reduction).

    Needs Re(uv) > 0 so the K factor can be evaluated off the axis.
    """
    cfg = cfg or default_config()
    u, v = complex(idx.u), complex(idx.v)
    uv = u * v
    if uv.real <= 0:
        raise DomainError("direct quadrature requires Re(uv) > 0")
    w2 = (u * u + v * v) / 2.0
    p, n = idx.p, idx.n
    cheap = QuadratureConfig(abs_tol=max(cfg.abs_tol, 1e-12),
                             rel_tol=max(cfg.rel_tol, 1e-12),
                             max_refinements=cfg.max_refinements)

    def log_integrand(sigma):
        tau = math.exp(sigma)
        y, ell = bessel_k_logscaled(p, uv / tau, cheap)
        mag = -tau / 2.0 - (w2.real / tau) + ell + (n + 1) * sigma
        phase = cmath.exp(complex(0.0, -w2.imag / tau))
        return y * phase, mag

    # truncation: decay like e^{-tau/2} to the right and like
    # e^{-Re((u+v)^2)/(2 tau)} to the left
    L = -math.log(min(cfg.rel_tol, cfg.abs_tol)) + 20.0
    right = math.log(2.0 * (L + abs(n + 1) * 10.0))
    c_left = ((u + v) ** 2).real / 2.0
    left = -math.log((L + abs(n + 1) * 10.0) / c_left)

    h = 0.25
    prev = None
    for _ in range(cfg.max_refinements):
        grid = np.arange(left, right + h / 2, h)
        pairs = [log_integrand(s) for s in grid]
        mags = np.array([m for _, m in pairs])
        peak = float(np.max(mags))
        vals = np.array([yv for yv, _ in pairs]) * np.exp(mags - peak)
        est = 0.5 * h * (np.sum(vals) - 0.5 * (vals[0] + vals[-1])) \
            * math.exp(peak)
        if prev is not None and abs(est - prev) <= max(
                cfg.abs_tol, cfg.rel_tol * abs(est)):
            return est
        prev = est
        h /= 2.0
    return est
