"""Closed-form invariant densities and their quadrature machinery.

Three regimes, indexed by the ray angle alpha of the matrix entry law:

* 0 < |alpha| < pi/2: a smooth density on the cone |arg z| <= |alpha|,
  exponentially decaying, normalized by 1/|2 K_p(2 e^{i alpha}/s)|^2.
* alpha = 0: the generalized inverse Gaussian density on the positive axis.
* |alpha| = pi/2: a one-dimensional density in y = Im z on the imaginary
  axis, normalized by 1/(pi^2 [J_p^2(2/s) + Y_p^2(2/s)]).

Integrals over the cone use the substitution t = sin(alpha-theta)/
sin(alpha+theta), which maps the cone onto (0,inf)^2 where the integrand
decays exponentially in both variables; the radial factor then reduces, for
r = e^x/sqrt(t), to an integrand proportional to exp(-(2 sqrt(phi(t))/s)
cosh x) with phi(t) = t + 1/t + 2 cos(2 alpha).
"""

from __future__ import annotations

import cmath
import math
import threading
import warnings
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .bessel import MacdonaldIndex, bessel_jy, bessel_k, macdonald_integral
from .exceptions import (DegenerateRecurrenceError, DomainError,
                         UnsupportedMomentError)
from .quadrature import QuadratureConfig, default_config, refine_trapezoid

MOMENT_TOTAL_DEGREE_MAX = 8


@contextmanager
def _quiet_quadpack():
    # near-roundoff tolerances make QUADPACK report expected extrapolation
    # noise; accuracy is controlled by our own cross-checks
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        yield


@dataclass(frozen=True)
class ModelParams:
    """The matrix-ensemble triple: gamma shape p, gamma scale s, ray angle
    alpha (radians, in [-pi/2, pi/2])."""

    p: float
    s: float
    alpha: float

    def __post_init__(self):
        if not (self.p > 0 and self.s > 0):
            raise DomainError("p and s must be positive")
        if not abs(self.alpha) <= math.pi / 2:
            raise DomainError("|alpha| must be <= pi/2")

    @property
    def bessel_argument(self) -> complex:
        """w = 2 e^{i alpha} / s, the argument of every K in the formulas."""
        return 2.0 * cmath.exp(1j * self.alpha) / self.s

    @property
    def on_axis(self) -> bool:
        return abs(self.alpha) == math.pi / 2


@dataclass(frozen=True)
class ConePoint:
    """Point z = r e^{i theta} of the cone S_alpha."""

    r: float
    theta: float

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError("r must be positive")

    def in_cone(self, params: ModelParams) -> bool:
        return abs(self.theta) <= abs(params.alpha)


@dataclass(frozen=True)
class MomentResult:
    """Mixed moment E(Z^m conj(Z)^n); satisfies M^(m,n) = conj(M^(n,m))."""

    m: int
    n: int
    value: complex


def normalization_constant(params: ModelParams,
                           cfg: QuadratureConfig | None = None) -> float:
    """c_{p,s}(alpha): 1/|2 K_p(2 e^{i alpha}/s)|^2 inside the open cone,
    1/(pi^2 [J_p^2 + Y_p^2](2/s)) on the axis."""
    cfg = cfg or default_config()
    if params.on_axis:
        J, Y = bessel_jy(params.p, 2.0 / params.s, cfg)
        return 1.0 / (math.pi ** 2 * (J * J + Y * Y))
    k = bessel_k(params.p, params.bessel_argument, cfg)
    return 1.0 / abs(2.0 * k) ** 2


def _phi(t, alpha):
    return t + 1.0 / t + 2.0 * math.cos(2.0 * alpha)


def density_cone(params: ModelParams, z: ConePoint,
                 cfg: QuadratureConfig | None = None) -> float:
    """Invariant density f_alpha at z = r e^{i theta}; 0 on and outside the
    cone boundary (the exponent diverges there, the set has measure zero).
    """
    if params.on_axis or params.alpha == 0.0:
        raise DomainError("density_cone needs 0 < |alpha| < pi/2")
    alpha, theta = params.alpha, z.theta
    if alpha < 0.0:
        alpha, theta = -alpha, -theta
    if abs(theta) >= alpha:
        return 0.0
    c = _norm_constant_cached(params, cfg)
    r, s, p = z.r, params.s, params.p
    sin_m = math.sin(alpha - theta)
    sin_p = math.sin(alpha + theta)
    sin2a = math.sin(2.0 * alpha)
    val = (c * sin2a / (r * r * sin_p * sin_p)
           * (sin_m / sin_p) ** (p - 1.0))
    expo = -(sin2a / s) * (1.0 / (r * sin_m) + r / sin_p)
    return val * math.exp(expo)


def _cone_density_grid(params: ModelParams, r, theta,
                       cfg: QuadratureConfig | None = None):
    """Vectorized f_alpha over numpy grids (used by the CLI exports)."""
    alpha = abs(params.alpha)
    th = np.sign(params.alpha) * np.asarray(theta, dtype=float) \
        if params.alpha < 0 else np.asarray(theta, dtype=float)
    r = np.asarray(r, dtype=float)
    c = _norm_constant_cached(params, cfg)
    s, p = params.s, params.p
    inside = np.abs(th) < alpha
    sin_m = np.where(inside, np.sin(alpha - th), 1.0)
    sin_p = np.where(inside, np.sin(alpha + th), 1.0)
    sin2a = math.sin(2.0 * alpha)
    val = (c * sin2a / (r * r * sin_p * sin_p) * (sin_m / sin_p) ** (p - 1.0)
           * np.exp(-(sin2a / s) * (1.0 / (r * sin_m) + r / sin_p)))
    return np.where(inside, val, 0.0)


_NORM_CACHE: dict = {}
_NORM_LOCK = threading.Lock()


def _norm_constant_cached(params: ModelParams,
                          cfg: QuadratureConfig | None) -> float:
    cfg = cfg or default_config()
    key = (params, cfg)
    with _NORM_LOCK:
        if key not in _NORM_CACHE:
            _NORM_CACHE[key] = normalization_constant(params, cfg)
        return _NORM_CACHE[key]


# ---------------------------------------------------------------------------
# alpha = 0: generalized inverse Gaussian
# ---------------------------------------------------------------------------

def density_gig(p: float, s: float, x: float,
                cfg: QuadratureConfig | None = None) -> float:
    """f_0(x) = x^{-p-1} exp{-(x + 1/x)/s} / (2 K_p(2/s)) on x > 0."""
    if x <= 0:
        raise DomainError("density_gig needs x > 0")
    cfg = cfg or default_config()
    k = _norm_gig_cached(p, s, cfg)
    return x ** (-p - 1.0) * math.exp(-(x + 1.0 / x) / s) / (2.0 * k)


_GIG_CACHE: dict = {}


def _norm_gig_cached(p, s, cfg):
    key = (p, s, cfg)
    with _NORM_LOCK:
        if key not in _GIG_CACHE:
            _GIG_CACHE[key] = bessel_k(p, 2.0 / s, cfg).real
        return _GIG_CACHE[key]


def gig_integrate(p: float, s: float, g,
                  cfg: QuadratureConfig | None = None) -> float:
    """Integral of g against the GIG density (substitution x = e^chi)."""
    cfg = cfg or default_config()
    L = -math.log(min(cfg.abs_tol, cfg.rel_tol)) + 20.0
    X = math.asinh(s * (L + (abs(p) + 1) * 20.0) / 2.0) + 2.0
    k = _norm_gig_cached(p, s, cfg)

    def f(chi):
        x = np.exp(chi)
        return g(x) * np.exp(-p * chi - (2.0 / s) * np.cosh(chi)) / (2.0 * k)

    return float(refine_trapezoid(f, -X, X, cfg, h0=0.25))


# ---------------------------------------------------------------------------
# |alpha| = pi/2: density on the imaginary axis
# ---------------------------------------------------------------------------

def _axis_profile(p: float, s: float, y: float,
                  cfg: QuadratureConfig | None = None) -> float:
    """Unnormalized profile f_+(y): |y|^{-p-1} e^{(1/y - y)/s} times the
    incomplete integral of e^{-(1/t - t)/s} |t|^{p-1} from c(y) to y.

    Evaluated through xi = [phi(y) - phi(t)]/s with phi(t) = t - 1/t, whose
    inverse is closed-form; this absorbs both the boundary layer at t = y
    (width ~ s y^2) and the exponential prefactor, so no large cancellation
    ever appears.
    """
    cfg = cfg or default_config()
    if y == 0.0:
        return s  # continuous limit at the origin
    phi_y = y - 1.0 / y
    sgn = 1.0 if y > 0 else -1.0

    def h(mu):
        # xi = e^mu maps the half-line to R, restoring spectral convergence
        xi = np.exp(mu)
        c = phi_y - s * xi
        root = np.sqrt(c * c + 4.0)
        if sgn > 0:
            # positive root of t^2 - c t - 1, cancellation-free for c < 0
            t = np.where(c >= 0.0, 0.5 * (c + root), 2.0 / (root - c))
        else:
            t = np.where(c <= 0.0, 0.5 * (c - root), -2.0 / (root + c))
        return xi * np.exp(-xi) * np.abs(t) ** (p - 1.0) * t * t / (1.0 + t * t)

    L = -math.log(min(cfg.abs_tol, cfg.rel_tol)) + 10.0 * (1 + abs(p))
    val = refine_trapezoid(h, -38.0, math.log(L), cfg, h0=0.5)
    return s * float(val) / abs(y) ** (p + 1.0)


def density_axis(params: ModelParams, y: float, sign: int | str = "+",
                 cfg: QuadratureConfig | None = None) -> float:
    """Density of Im Z against 1-D Lebesgue measure on the imaginary axis
    for alpha = sign * pi/2; continuous at y = 0."""
    cfg = cfg or default_config()
    sgn = +1 if sign in (1, +1, "+", "plus") else -1
    axis_params = ModelParams(params.p, params.s, sgn * math.pi / 2)
    c = _norm_constant_cached(axis_params, cfg)
    yy = y if sgn > 0 else -y  # f_-(y) = f_+(-y)
    return c * _axis_profile(params.p, params.s, yy, cfg)


def axis_integrate(p: float, s: float, g, cfg: QuadratureConfig | None = None,
                   core_halfwidth: float = 8.0) -> float:
    """Integral over the real line of g(y) times the *normalized* axis
    density; the 1/y^2 tails are mapped through y = 1/v."""
    cfg = cfg or default_config()
    axis_params = ModelParams(p, s, math.pi / 2)
    c = _norm_constant_cached(axis_params, cfg)

    def f(y):
        return g(y) * c * _axis_profile(p, s, y, cfg)

    T = core_halfwidth
    eps = dict(epsabs=0.1 * cfg.abs_tol, epsrel=0.1 * cfg.rel_tol, limit=400)
    with _quiet_quadpack():
        core = integrate.quad(f, -T, T, points=[0.0, -1.0, 1.0], **eps)[0]
        tail_pos = integrate.quad(lambda v: f(1.0 / v) / (v * v),
                                  1e-14, 1.0 / T, **eps)[0]
        tail_neg = integrate.quad(lambda v: f(1.0 / v) / (v * v),
                                  -1.0 / T, -1e-14, **eps)[0]
    return core + tail_pos + tail_neg


# ---------------------------------------------------------------------------
# Dyson's continued-fraction density
# ---------------------------------------------------------------------------

_DYSON_CACHE: dict = {}
_DYSON_LOCK = threading.Lock()


def _dyson_norm(p: float, s: float, t: float, cfg: QuadratureConfig) -> float:
    key = (p, s, t, cfg)
    with _DYSON_LOCK:
        if key in _DYSON_CACHE:
            return _DYSON_CACHE[key]
    with _quiet_quadpack():
        val, _ = integrate.quad(
            lambda x: x ** (p - 1.0) * (1.0 + x) ** (-p)
            * math.exp(-x / (s * t)),
            0.0, np.inf, epsabs=0.1 * cfg.abs_tol, epsrel=0.1 * cfg.rel_tol,
            limit=400)
    with _DYSON_LOCK:
        _DYSON_CACHE[key] = 1.0 / val
        return _DYSON_CACHE[key]


def density_dyson(p: float, s: float, t: float, x: float,
                  cfg: QuadratureConfig | None = None) -> float:
    """Density C x^{p-1} (1+x)^{-p} e^{-x/(s t)} of Dyson's random continued
    fraction; C fixed by unit mass, computed once per (p, s, t) and cached.
    """
    if x <= 0:
        return 0.0
    if not (p > 0 and s > 0 and t > 0):
        raise DomainError("density_dyson needs p, s, t > 0")
    cfg = cfg or default_config()
    C = _dyson_norm(p, s, t, cfg)
    return C * x ** (p - 1.0) * (1.0 + x) ** (-p) * math.exp(-x / (s * t))


# ---------------------------------------------------------------------------
# cone integrals via the t-substitution
# ---------------------------------------------------------------------------

def _cone_theta_of_t(t, alpha):
    # e^{i theta} = (e^{i alpha} + t e^{-i alpha}) / sqrt(t phi(t))
    return np.arctan2((1.0 - t) * math.sin(alpha), (1.0 + t) * math.cos(alpha))


def cone_integrate(params: ModelParams, integrand=None,
                   cfg: QuadratureConfig | None = None) -> float:
    """Integral over the cone of integrand(r, theta) against the invariant
    density (integrand omitted: total mass).  The integrand must accept a
    numpy array of radii at a fixed angle.

    Uses the exact map (theta, r) -> (t, x) with
    t = sin(alpha-theta)/sin(alpha+theta) and r = e^x/sqrt(t):

        int h f dz = c int_0^inf t^{p-1} int_R h(e^x/sqrt(t), theta(t))
                       exp{-(2 sqrt(phi(t))/s) cosh x} dx dt.

    The inner integral is a refined trapezoidal sum (vectorized); the outer
    is adaptive in eta = ln t, which concentrates resolution at the K_0-type
    logarithmic peak that develops at t = 1 when alpha -> pi/2.
    """
    cfg = cfg or default_config()
    if params.on_axis or params.alpha == 0.0:
        raise DomainError("cone_integrate needs 0 < |alpha| < pi/2")
    alpha = abs(params.alpha)
    mirror = params.alpha < 0
    p, s = params.p, params.s
    c = _norm_constant_cached(params, cfg)
    L = -math.log(min(cfg.abs_tol, cfg.rel_tol)) + 15.0

    def inner(eta):
        t = math.exp(eta)
        root_phi = math.sqrt(_phi(t, alpha))
        a = 2.0 * root_phi / s
        X = math.acosh(max(2.0, (L + 40.0) / a))

        def f(x):
            w = np.exp(-a * np.cosh(x))
            if integrand is not None:
                theta = _cone_theta_of_t(t, alpha)
                if mirror:
                    theta = -theta
                w = w * integrand(np.exp(x) / math.sqrt(t), theta)
            return w

        return float(refine_trapezoid(f, -X, X, cfg, h0=0.25))

    def outer(eta):
        return math.exp(p * eta) * inner(eta)

    # truncation in eta: phi(e^eta) ~ e^{|eta|} so the inner value decays
    # like exp(-2 e^{|eta|/2}/s); solve for the last relevant |eta|
    H = 2.0 * math.log(max(2.0, s * (L + (p + 1.0) * 40.0) / 2.0)) + 4.0
    eps = dict(epsabs=0.1 * cfg.abs_tol, epsrel=0.1 * cfg.rel_tol, limit=400)
    with _quiet_quadpack():
        lo = integrate.quad(outer, -H, 0.0, **eps)[0]
        hi = integrate.quad(outer, 0.0, H, **eps)[0]
    return c * (lo + hi)


def cone_log_modulus_moment(params: ModelParams,
                            cfg: QuadratureConfig | None = None) -> float:
    """int ln|z| f_alpha(z) dz (minus the Lyapunov exponent)."""
    return cone_integrate(params, lambda r, theta: np.log(r), cfg)


def cone_integrate_density(params: ModelParams, density, integrand=None,
                           cfg: QuadratureConfig | None = None) -> float:
    """Like :func:`cone_integrate` but against an arbitrary density on the
    cone given as a vectorized density(r_array, theta) callable; used for
    the inverted (reciprocal-product) density, which shares the
    exp(-(2 sqrt(phi)/s) cosh x) decay pattern of f itself."""
    cfg = cfg or default_config()
    if params.on_axis or params.alpha == 0.0:
        raise DomainError("cone_integrate_density needs 0 < |alpha| < pi/2")
    alpha = abs(params.alpha)
    mirror = params.alpha < 0
    s = params.s
    L = -math.log(min(cfg.abs_tol, cfg.rel_tol)) + 15.0

    def inner(eta):
        t = math.exp(eta)
        phi = _phi(t, alpha)
        a = 2.0 * math.sqrt(phi) / s
        X = math.acosh(max(2.0, (L + 40.0) / a))
        theta = _cone_theta_of_t(t, alpha)
        if mirror:
            theta = -theta

        def f(x):
            r = np.exp(x) / math.sqrt(t)
            w = density(r, theta) * r * r / phi
            if integrand is not None:
                w = w * integrand(r, theta)
            return w

        return float(refine_trapezoid(f, -X, X, cfg, h0=0.25))

    H = 2.0 * math.log(max(2.0, s * (L + (params.p + 1.0) * 40.0) / 2.0)) + 4.0
    eps = dict(epsabs=0.1 * cfg.abs_tol, epsrel=0.1 * cfg.rel_tol, limit=400)
    with _quiet_quadpack():
        lo = integrate.quad(inner, -H, 0.0, **eps)[0]
        hi = integrate.quad(inner, 0.0, H, **eps)[0]
    return math.sin(2.0 * alpha) * (lo + hi)


class InvariantMeasure:
    """Quadrature handle for a stationary density: the cone density for
    0 < |alpha| < pi/2, the GIG density at alpha = 0, the axis density at
    |alpha| = pi/2; ``inverted=True`` selects the law of the reciprocal,
    u(z) = |z|^{-4} f(1/z) (same support, integrates to 1).
    """

    def __init__(self, params: ModelParams, inverted: bool = False):
        self.params = params
        self.inverted = inverted

    def inverse(self) -> "InvariantMeasure":
        return InvariantMeasure(self.params, inverted=not self.inverted)

    def _kind(self) -> str:
        if self.params.on_axis:
            return "axis"
        return "gig" if self.params.alpha == 0.0 else "cone"

    def mass(self, cfg: QuadratureConfig | None = None) -> float:
        cfg = cfg or default_config()
        p, s = self.params.p, self.params.s
        kind = self._kind()
        if kind == "cone":
            if not self.inverted:
                return cone_integrate(self.params, None, cfg)
            dens = self._inverted_cone_density(cfg)
            return cone_integrate_density(self.params, dens, None, cfg)
        if kind == "gig":
            if not self.inverted:
                return gig_integrate(p, s, lambda x: np.ones_like(x), cfg)
            k = _norm_gig_cached(p, s, cfg)
            X = self._gig_halfwidth(cfg)
            return float(refine_trapezoid(
                lambda chi: np.exp(p * chi - (2.0 / s) * np.cosh(chi))
                / (2.0 * k), -X, X, cfg, h0=0.25))
        if not self.inverted:
            return axis_integrate(p, s, lambda y: 1.0, cfg)
        return self._axis_inverted_moment(lambda y: 1.0, cfg)

    def log_modulus_moment(self, cfg: QuadratureConfig | None = None) -> float:
        """int ln|z| against the handled density."""
        cfg = cfg or default_config()
        p, s = self.params.p, self.params.s
        kind = self._kind()
        if kind == "cone":
            if not self.inverted:
                return cone_log_modulus_moment(self.params, cfg)
            dens = self._inverted_cone_density(cfg)
            return cone_integrate_density(
                self.params, dens, lambda r, theta: np.log(r), cfg)
        if kind == "gig":
            if not self.inverted:
                return gig_integrate(p, s, np.log, cfg)
            k = _norm_gig_cached(p, s, cfg)
            X = self._gig_halfwidth(cfg)
            return float(refine_trapezoid(
                lambda chi: chi * np.exp(p * chi - (2.0 / s) * np.cosh(chi))
                / (2.0 * k), -X, X, cfg, h0=0.25))
        if not self.inverted:
            return axis_integrate(p, s, lambda y: math.log(abs(y)), cfg)
        return self._axis_inverted_moment(lambda y: math.log(abs(y)), cfg)

    def _gig_halfwidth(self, cfg) -> float:
        L = -math.log(min(cfg.abs_tol, cfg.rel_tol)) + 20.0
        return math.asinh(self.params.s
                          * (L + (self.params.p + 1.0) * 20.0) / 2.0) + 2.0

    def _inverted_cone_density(self, cfg):
        pos = ModelParams(self.params.p, self.params.s, abs(self.params.alpha))

        def dens(r, theta):
            return _cone_density_grid(pos, 1.0 / r, -theta, cfg) / r ** 4

        return dens

    def _axis_inverted_moment(self, g, cfg) -> float:
        p, s = self.params.p, self.params.s
        axis_params = ModelParams(p, s, math.pi / 2)
        c = _norm_constant_cached(axis_params, cfg)

        def f(y):
            if y == 0.0:
                return 0.0
            return g(y) * c * _axis_profile(p, s, -1.0 / y, cfg) / y ** 2

        T = 8.0
        eps = dict(epsabs=0.1 * cfg.abs_tol, epsrel=0.1 * cfg.rel_tol,
                   limit=400)
        with _quiet_quadpack():
            core = integrate.quad(f, -T, T, points=[0.0, -1.0, 1.0], **eps)[0]
            tail_p = integrate.quad(lambda v: f(1.0 / v) / (v * v),
                                    1e-14, 1.0 / T, **eps)[0]
            tail_m = integrate.quad(lambda v: f(1.0 / v) / (v * v),
                                    -1.0 / T, -1e-14, **eps)[0]
        return core + tail_p + tail_m


# ---------------------------------------------------------------------------
# moments through Macdonald integrals
# ---------------------------------------------------------------------------

def moment(params: ModelParams, m: int, n: int,
           cfg: QuadratureConfig | None = None) -> MomentResult:
    """Mixed moment M^(m,n) = E(Z^m conj(Z)^n) for n <= m, assembled from
    Macdonald integrals at u = conj(v) = 2 e^{i alpha}/s.

    Only n <= m is implemented (use M^(m,n) = conj(M^(n,m)) otherwise);
    total degree is capped at 8 because the backward recurrence deepens
    with m + n.
    """
    cfg = cfg or default_config()
    if m < 0 or n < 0:
        raise UnsupportedMomentError("m, n must be nonnegative")
    if n > m:
        raise UnsupportedMomentError(
            "n <= m required; use conjugation M^(m,n) = conj(M^(n,m))")
    if m + n > MOMENT_TOTAL_DEGREE_MAX:
        raise UnsupportedMomentError(
            f"total degree m+n capped at {MOMENT_TOTAL_DEGREE_MAX}")
    if params.on_axis:
        raise DomainError("moments implemented for |alpha| < pi/2")
    if m == n == 0:
        return MomentResult(0, 0, 1.0 + 0.0j)
    alpha, p, s = params.alpha, params.p, params.s
    if alpha == 0.0:
        raise DegenerateRecurrenceError(
            "alpha = 0 degenerates the backward recurrence (u^2 == v^2); "
            "use the GIG formulas instead")
    u = 2.0 * cmath.exp(1j * alpha) / s
    v = u.conjugate()
    c = _norm_constant_cached(params, cfg)
    cos2a = math.cos(2.0 * alpha)
    depth = -(m + n + 1)
    total = 0.0 + 0.0j
    # phi(t)^n expanded multinomially over (t, 1/t, 2 cos 2 alpha); the
    # ray factor (e^{i alpha} + t e^{-i alpha})^{m-n} binomially
    for i in range(n + 1):
        for j in range(n - i + 1):
            k = n - i - j
            w_ijk = (math.factorial(n)
                     / (math.factorial(i) * math.factorial(j)
                        * math.factorial(k))) * (2.0 * cos2a) ** k
            for b in range(m - n + 1):
                w_b = math.comb(m - n, b) * cmath.exp(
                    1j * alpha * (m - n - 2 * b))
                order = p - m + i - j + b
                idx = MacdonaldIndex(order, depth, u, v)
                total += w_ijk * w_b * macdonald_integral(idx, cfg)
    total *= 4.0 * c * (2.0 / s) ** (m + n)
    return MomentResult(m, n, total)


# ---------------------------------------------------------------------------
# stationarity residuals (fixed-point defect of the invariant density)
# ---------------------------------------------------------------------------

def _gamma_pdf(a, p, s):
    return a ** (p - 1.0) * np.exp(-a / s) / (s ** p * math.gamma(p))


def stationary_residual(params: ModelParams, z: ConePoint,
                        cfg: QuadratureConfig | None = None) -> float:
    """|f(z) - |z|^{-4} int_0^{a(1/z)} f(1/z - a e^{i alpha}) gamma(a) da|.

    Zero for z on the cone boundary (both sides vanish).
    """
    cfg = cfg or default_config()
    if params.on_axis or params.alpha == 0.0:
        raise DomainError("stationary_residual needs 0 < |alpha| < pi/2")
    alpha = abs(params.alpha)
    theta = z.theta * (1 if params.alpha > 0 else -1)
    pos = ModelParams(params.p, params.s, alpha)
    if abs(theta) >= alpha:
        return 0.0
    r = z.r
    lhs = density_cone(pos, ConePoint(r, theta), cfg)
    # upper limit a(1/z) with arg(1/z) = -theta
    a_max = (1.0 / r) * math.sin(alpha - theta) / math.sin(2.0 * alpha)
    w = (1.0 / r) * cmath.exp(-1j * theta)

    def f(a):
        pt = w - a * cmath.exp(1j * alpha)
        rr, tt = abs(pt), cmath.phase(pt)
        if rr == 0.0 or abs(tt) >= alpha:
            return 0.0
        return density_cone(pos, ConePoint(rr, tt), cfg) \
            * float(_gamma_pdf(a, params.p, params.s))

    with _quiet_quadpack():
        val, _ = integrate.quad(f, 0.0, a_max, epsabs=0.01 * cfg.abs_tol,
                                epsrel=0.1 * cfg.rel_tol, limit=400)
    rhs = val / r ** 4
    return abs(lhs - rhs)


def axis_stationary_residual(params: ModelParams, y: float,
                             sign: int | str = "+",
                             cfg: QuadratureConfig | None = None) -> float:
    """|f_+(y) - y^{-2} int_0^inf f_+(-a - 1/y) gamma(a) da| (the minus-sign
    profile follows by f_-(y) = f_+(-y))."""
    cfg = cfg or default_config()
    if y == 0.0:
        raise DomainError("y must be nonzero")
    sgn = +1 if sign in (1, +1, "+", "plus") else -1
    yy = y if sgn > 0 else -y
    p, s = params.p, params.s
    lhs = _axis_profile(p, s, yy, cfg)

    def f(a):
        return _axis_profile(p, s, -a - 1.0 / yy, cfg) \
            * float(_gamma_pdf(a, p, s))

    with _quiet_quadpack():
        val, _ = integrate.quad(f, 0.0, np.inf, epsabs=0.01 * cfg.abs_tol,
                                epsrel=0.1 * cfg.rel_tol, limit=400)
    return abs(lhs - val / yy ** 2)
