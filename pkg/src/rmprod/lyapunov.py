"""Lyapunov exponent of the random matrix product: exact Bessel-ratio
formula, integer-order closed forms, the order recurrence, quadrature
against the invariant measure, both asymptotic regimes with an exact
rational-arithmetic coefficient generator, Pade resummation, and the
imaginary-axis small-s series.

The exponent is Re of Lambda_p(w) = d/dp ln K_p(w) at w = 2 e^{i alpha}/s,
in nats per matrix factor.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bessel import bessel_k_logscaled, digamma, log_derivative_order
from .exceptions import (DegenerateTableError, DomainError, PoleError,
                         UnsupportedOrderError)
from .measure import ModelParams
from .quadrature import QuadratureConfig, default_config

METHODS = ("exact", "integer_closed_form", "recurrence",
           "quadrature_of_measure", "large_s_series", "small_s_series",
           "pade_resummed", "axis_series", "monte_carlo")


@dataclass(frozen=True)
class LyapunovValue:
    """A Lyapunov exponent estimate tagged with the method that produced it."""

    value: float
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if not math.isfinite(self.value):
            raise DomainError("non-finite Lyapunov value")


@dataclass(frozen=True)
class SeriesExpansion:
    """Truncated expansion: coeffs[k] multiplies the k-th basis element
    (powers s^k for the small-s and axis kinds).  order == len(coeffs).

    For kind='small_s' at |alpha| = pi/2 every odd-index coefficient
    vanishes (the real part of odd-order terms dies there).
    """

    kind: str
    coeffs: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in ("large_s", "small_s",
                             "axis_density_numerator",
                             "axis_density_denominator"):
            raise DomainError(f"unknown series kind {self.kind!r}")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __call__(self, s: float) -> float:
        if self.kind == "large_s":
            # basis is (1, branch-specific remainder unit), not powers of s
            raise DomainError("large_s expansions are not power series; "
                              "use asympt_large_s for evaluation")
        return float(sum(c * s ** k for k, c in enumerate(self.coeffs)))


# ---------------------------------------------------------------------------
# exact formula and closed forms
# ---------------------------------------------------------------------------

def lyapunov_exact(params: ModelParams,
                   cfg: QuadratureConfig | None = None) -> LyapunovValue:
    """lambda_{p,s}(alpha) = Re[ d/dp K_p(2 e^{i alpha}/s) / K_p(...) ]."""
    cfg = cfg or default_config()
    lam = log_derivative_order(params.p, params.bessel_argument, cfg).real
    return LyapunovValue(lam, "exact")


def lyapunov_integer(n: int, s: float, alpha: float,
                     cfg: QuadratureConfig | None = None) -> LyapunovValue:
    """Closed form at integer shape: Re of the finite sum
    sum_{k<n} n!/(2(n-k)k!) (e^{i alpha}/s)^{k-n} K_k(w)/K_n(w)."""
    cfg = cfg or default_config()
    if not (1 <= n <= 16) or n != int(n):
        raise DomainError("integer order n must lie in 1..16")
    params = ModelParams(float(n), s, alpha)
    w = params.bessel_argument
    pairs = [bessel_k_logscaled(float(k), w, cfg) for k in range(n + 1)]
    total = 0.0 + 0.0j
    for k in range(n):
        coeff = math.factorial(n) / (2.0 * (n - k) * math.factorial(k))
        total += (coeff * (cmath.exp(1j * alpha) / s) ** (k - n)
                  * (pairs[k][0] / pairs[n][0])
                  * math.exp(pairs[k][1] - pairs[n][1]))
    return LyapunovValue(total.real, "integer_closed_form")


def lambda_recurrence(p: float, w: complex,
                      cfg: QuadratureConfig | None = None) -> complex:
    """Lambda_p(w) climbed upward from two directly-evaluated base orders
    at the fractional part of p (downward K-ratios are unstable)."""
    cfg = cfg or default_config()
    if not p > 2:
        raise DomainError("recurrence route requires p > 2")
    w = complex(w)
    frac = p - math.floor(p)
    q1, q2 = frac + 1.0, frac + 2.0
    lam_prev = log_derivative_order(q1, w, cfg)
    lam_cur = log_derivative_order(q2, w, cfg)
    pairs = {q1: bessel_k_logscaled(q1, w, cfg),
             q2: bessel_k_logscaled(q2, w, cfg)}
    q = q2
    while q < p - 0.5:
        q += 1.0
        pairs[q] = bessel_k_logscaled(q, w, cfg)

        def ratio(a, b):
            ya, ea = pairs[a]
            yb, eb = pairs[b]
            return (ya / yb) * math.exp(ea - eb)

        lam_next = ((2.0 * (q - 1.0) / w) * ratio(q - 1.0, q) * lam_cur
                    + ratio(q - 2.0, q) * lam_prev
                    + (2.0 / w) * ratio(q - 1.0, q))
        lam_prev, lam_cur = lam_cur, lam_next
    if abs(q - p) > 1e-9:
        raise DomainError("p must equal base + integer to use the recurrence")
    return lam_cur


def lloyd_lyapunov(z: complex) -> float:
    """Lloyd's model: solve u + 1/u = z (Im z > 0) for the root with
    |u| > 1 and return ln|u| > 0."""
    z = complex(z)
    if not z.imag > 0:
        raise DomainError("lloyd_lyapunov requires Im z > 0")
    disc = cmath.sqrt(z * z - 4.0)
    roots = ((z + disc) / 2.0, (z - disc) / 2.0)
    u = max(roots, key=abs)
    if abs(u) <= 1.0:
        raise DomainError("degenerate |u| = 1 (z in [-2, 2])")
    return math.log(abs(u))


def lyapunov_from_measure(density_marginal, case: str = "row_bottom_random",
                          cfg: QuadratureConfig | None = None) -> LyapunovValue:
    """Exponent from the invariant measure itself.

    Case 'row_bottom_random' (matrices [[0,1],[1,a e^{i alpha}]]):
    lambda = -int ln|z| d nu.  Case 'row_top_random' (the reciprocal
    product, [[a e^{i alpha},1],[1,0]]): lambda = +int ln|z| d nu.

    ``density_marginal`` is any handle exposing log_modulus_moment(cfg),
    e.g. :class:`rmprod.measure.InvariantMeasure`.
    """
    cfg = cfg or default_config()
    if case not in ("row_bottom_random", "row_top_random"):
        raise DomainError(f"unknown case {case!r}")
    mom = density_marginal.log_modulus_moment(cfg)
    if not math.isfinite(mom):
        raise DomainError("ln-moment quadrature diverged")
    sign = -1.0 if case == "row_bottom_random" else 1.0
    return LyapunovValue(sign * mom, "quadrature_of_measure")


# ---------------------------------------------------------------------------
# small-s series: exact generator from the Hankel symbols
# ---------------------------------------------------------------------------
#
# K_p(w) ~ sqrt(pi/2w) e^{-w} sum_m (p,m)/(2w)^m with the Hankel symbol
# (p,m) = Gamma(p+m+1/2) / (m! Gamma(p-m+1/2)), a polynomial in p; hence
# Lambda_p(w) ~ [sum_{m>=1} d_p(p,m) x^m] / [sum_{m>=0} (p,m) x^m] in
# x = 1/(2w), and lambda = sum_n l_n s^n with
# l_n = c_n(p) cos(n alpha) / 4^n where c_n is the quotient coefficient.

def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else Fraction(0))
            + (b[i] if i < len(b) else Fraction(0)) for i in range(n)]


def _poly_scale(a, c):
    return [ai * c for ai in a]


def _poly_diff(a):
    return [a[i] * i for i in range(1, len(a))] or [Fraction(0)]


def _poly_eval(a, x):
    acc = 0.0
    for c in reversed(a):
        acc = acc * x + float(c)
    return acc


def _hankel_polynomials(order: int):
    """[(h_m, h_m')] for m = 0..order, h_m the polynomial (p, m) in p."""
    out = [([Fraction(1)], [Fraction(0)])]
    h = [Fraction(1)]
    for m in range(1, order + 1):
        # multiply by (4p^2 - (2m-1)^2) and divide by the new 4m in 4^m m!
        h = _poly_mul(h, [Fraction(-(2 * m - 1) ** 2), Fraction(0), Fraction(4)])
        h = _poly_scale(h, Fraction(1, 4 * m))
        out.append((h, _poly_diff(h)))
    return out


def small_s_coefficients(p: float, order: int):
    """Generated coefficients [l-hat_1, ..., l-hat_order] of the expansion
    lambda = sum_n l-hat_n(p) cos(n alpha) s^n, from the Hankel-symbol
    series (exact rational arithmetic, then evaluated at p)."""
    if order < 1:
        raise UnsupportedOrderError("order must be >= 1")
    if order > 64:
        raise UnsupportedOrderError("generator capped at order 64")
    hank = _hankel_polynomials(order)
    # quotient series c_m: N = D * c with D_0 = 1
    c = []
    for m in range(1, order + 1):
        num = hank[m][1]  # d/dp (p, m)
        for k in range(1, m):
            num = _poly_add(num, _poly_scale(_poly_mul(hank[k][0], c[m - k - 1]),
                                             Fraction(-1)))
        c.append(num)
    return [_poly_eval(c[m - 1], p) / 4.0 ** m for m in range(1, order + 1)]


def _table_l(p: float, alpha: float):
    """Hard-coded first five small-s coefficients."""
    return (
        p * math.cos(alpha) / 2.0,
        -p * math.cos(2.0 * alpha) / 8.0,
        -p * (4.0 * p * p - 13.0) * math.cos(3.0 * alpha) / 192.0,
        p * (4.0 * p * p - 7.0) * math.cos(4.0 * alpha) / 128.0,
        p * (48.0 * p ** 4 - 920.0 * p * p + 1187.0)
        * math.cos(5.0 * alpha) / 20480.0,
    )


_TABLE_VERIFIED = False


def _verify_table_once():
    """Guard against transcription slips: the generator must reproduce the
    hard-coded table (checked once per process)."""
    global _TABLE_VERIFIED
    if _TABLE_VERIFIED:
        return
    for p in (1.0, 2.0, 3.5):
        gen = small_s_coefficients(p, 5)
        for alpha in (0.0, math.pi / 4):
            tab = _table_l(p, alpha)
            for n in range(1, 6):
                want = gen[n - 1] * math.cos(n * alpha)
                if abs(want - tab[n - 1]) > 1e-12 * max(1.0, abs(want)):
                    raise AssertionError(
                        f"small-s generator disagrees with table at "
                        f"p={p}, n={n}: {want} vs {tab[n - 1]}")
    _TABLE_VERIFIED = True


def asympt_small_s(params: ModelParams, order: int = 5,
                   cfg: QuadratureConfig | None = None):
    """Small-s expansion sum l_n s^n (documented validity s <= 0.5).

    order <= 5 comes from the hard-coded table; the exact generator backs
    it (and is asserted against it).  Returns (SeriesExpansion,
    LyapunovValue of the partial sum).
    """
    if not 1 <= order <= 5:
        raise UnsupportedOrderError(
            "asympt_small_s implements orders 1..5; use "
            "small_s_coefficients for longer expansions")
    _verify_table_once()
    table = _table_l(params.p, params.alpha)
    coeffs = (0.0,) + table[:order]
    series = SeriesExpansion("small_s", coeffs)
    return series, LyapunovValue(series(params.s), "small_s_series")


def small_s_series(params: ModelParams, order: int) -> SeriesExpansion:
    """Generator-backed small-s series of arbitrary order (for Pade work)."""
    _verify_table_once()
    lhat = small_s_coefficients(params.p, order)
    coeffs = (0.0,) + tuple(
        lhat[n - 1] * math.cos(n * params.alpha) for n in range(1, order + 1))
    return SeriesExpansion("small_s", coeffs)


# ---------------------------------------------------------------------------
# large-s law
# ---------------------------------------------------------------------------

def asympt_large_s(params: ModelParams, order: int = 1,
                   cfg: QuadratureConfig | None = None):
    """Large-s law lambda = ln s + psi(p) + R_{p,s}(alpha) with the leading
    remainder per shape regime:

        p < 1 : 2 cos(2 p alpha) (Gamma(1-p)/Gamma(1+p)) ln s / s^{2p}
        p = 1 : 2 cos(2 alpha) (ln s)^2 / s^2
        p > 1 : cos(2 alpha) / ((p-1)^2 s^2)

    Documented validity s >= 10.  order 0 drops the remainder; orders up
    to 6 are accepted (the remainder itself is leading-order).
    """
    if not 0 <= order <= 6:
        raise UnsupportedOrderError("large-s expansion implemented to the "
                                    "leading remainder (order <= 6)")
    p, s, alpha = params.p, params.s, params.alpha
    base = math.log(s) + digamma(p)
    if p < 1.0:
        coeff = 2.0 * math.cos(2.0 * p * alpha) \
            * math.gamma(1.0 - p) / math.gamma(1.0 + p)
        rem = coeff * math.log(s) / s ** (2.0 * p)
    elif p == 1.0:
        coeff = 2.0 * math.cos(2.0 * alpha)
        rem = coeff * math.log(s) ** 2 / (s * s)
    else:
        coeff = math.cos(2.0 * alpha) / (p - 1.0) ** 2
        rem = coeff / (s * s)
    series = SeriesExpansion("large_s", (digamma(p), coeff))
    value = base + (rem if order >= 1 else 0.0)
    return series, LyapunovValue(value, "large_s_series")


# ---------------------------------------------------------------------------
# Pade resummation
# ---------------------------------------------------------------------------

def _solve_complete_pivot(A, b):
    """Gaussian elimination with complete pivoting; None when singular."""
    A = [row[:] for row in A]
    b = list(b)
    n = len(b)
    col_perm = list(range(n))
    scale = max((abs(v) for row in A for v in row), default=0.0)
    if scale == 0.0:
        return None
    for k in range(n):
        piv, pi, pj = 0.0, k, k
        for i in range(k, n):
            for j in range(k, n):
                if abs(A[i][j]) > piv:
                    piv, pi, pj = abs(A[i][j]), i, j
        if piv <= 1e-14 * scale:
            return None
        A[k], A[pi] = A[pi], A[k]
        b[k], b[pi] = b[pi], b[k]
        for row in A:
            row[k], row[pj] = row[pj], row[k]
        col_perm[k], col_perm[pj] = col_perm[pj], col_perm[k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            for j in range(k, n):
                A[i][j] -= f * A[k][j]
            b[i] -= f * b[k]
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        acc = b[i] - sum(A[i][j] * x[j] for j in range(i + 1, n))
        x[i] = acc / A[i][i]
    out = [0.0] * n
    for idx, v in zip(col_perm, x):
        out[idx] = v
    return out


def pade_coefficients(coeffs, L: int, M: int):
    """Numerator/denominator coefficients of the [L/M] approximant of the
    power series ``coeffs`` (ascending).  Raises DegenerateTableError when
    the Pade system is singular."""
    a = list(coeffs) + [0.0] * max(0, L + M + 1 - len(coeffs))
    if M == 0:
        return a[:L + 1], [1.0]
    A = [[a[L + k - j] if L + k - j >= 0 else 0.0
          for j in range(1, M + 1)] for k in range(1, M + 1)]
    rhs = [-a[L + k] for k in range(1, M + 1)]
    sol = _solve_complete_pivot(A, rhs)
    if sol is None:
        raise DegenerateTableError(f"singular [{L}/{M}] Pade system")
    den = [1.0] + sol
    num = [sum(den[j] * a[k - j] for j in range(0, min(k, M) + 1))
           for k in range(L + 1)]
    return num, den


def pade_resum(series: SeriesExpansion, s: float, L: int,
               M: int) -> LyapunovValue:
    """Evaluate the [L/M] Pade approximant of the truncated series at s.

    [L/0] is the plain partial sum.  A singular table falls back to
    [L-1/M-1]; a vanishing denominator at s raises PoleError.
    """
    if L < 0 or M < 0:
        raise DomainError("L, M must be nonnegative")
    if L + M + 1 > series.order:
        raise UnsupportedOrderError(
            f"[{L}/{M}] needs {L + M + 1} coefficients, series has "
            f"{series.order}")
    try:
        num, den = pade_coefficients(series.coeffs, L, M)
    except DegenerateTableError:
        if L >= 1 and M >= 1:
            return pade_resum(series, s, L - 1, M - 1)
        raise
    q = float(np.polyval(list(reversed(den)), s))
    if abs(q) < 1e-12:
        raise PoleError(f"[{L}/{M}] denominator vanishes at s={s}")
    val = float(np.polyval(list(reversed(num)), s)) / q
    return LyapunovValue(val, "pade_resummed")


# ---------------------------------------------------------------------------
# axis-density series (alpha = pi/2, small s)
# ---------------------------------------------------------------------------

AXIS_SERIES_ORDER_MAX = 12


def axis_series_layers(p: float, order: int):
    """Coefficient layers u_k^{(n)} of the axis-density expansion
    u(y) ~ sum_n u^{(n)}(y) s^n, where odd layers are combinations of
    (1+y^2)^{-k} and even layers carry an extra factor y.

    Built from u_1^{(1)} = 1 by the eight-branch recurrence; layer n is
    {k: coefficient}.
    """
    if not 1 <= order <= AXIS_SERIES_ORDER_MAX:
        raise UnsupportedOrderError(
            f"axis series capped at order {AXIS_SERIES_ORDER_MAX}")
    layers = {1: {1: 1.0}}
    while max(layers) < order:
        mprev = max(layers)
        prev = layers[mprev]
        g = lambda k: prev.get(k, 0.0)  # noqa: E731
        if mprev % 2 == 1:
            n = (mprev + 1) // 2  # build layer 2n from 2n-1
            cur = {n + 1: (p - 1.0 + 2.0 * n) * g(n)}
            for k in range(n + 2, 4 * n - 1):
                cur[k] = (p - 3.0 + 2.0 * k) * g(k - 1) \
                    - 2.0 * (k - 2.0) * g(k - 2)
            if 4 * n - 1 > n + 1:
                cur[4 * n - 1] = -2.0 * (4.0 * n - 3.0) * g(4 * n - 3)
            layers[2 * n] = cur
        else:
            n = mprev // 2  # build layer 2n+1 from 2n
            cur = {n + 1: (p + 2.0 * n) * g(n + 1),
                   n + 2: (p + 2.0 * n + 2.0) * g(n + 2)
                   - (p + 2.0 + 4.0 * n) * g(n + 1)}
            for k in range(n + 3, 4 * n):
                cur[k] = (p - 2.0 + 2.0 * k) * g(k) \
                    + (6.0 - p - 4.0 * k) * g(k - 1) \
                    + 2.0 * (k - 2.0) * g(k - 2)
            cur[4 * n] = (6.0 - p - 16.0 * n) * g(4 * n - 1) \
                + 2.0 * (4.0 * n - 2.0) * g(4 * n - 2)
            cur[4 * n + 1] = (8.0 * n - 2.0) * g(4 * n - 1)
            layers[2 * n + 1] = cur
    return layers


def _alpha_beta(kmax: int):
    """int_0^inf (1+y^2)^{-k} dy and int_0^inf ln(y) (1+y^2)^{-k} dy by
    their recurrences from alpha_1 = pi/2, beta_1 = 0."""
    alpha = {1: math.pi / 2.0}
    beta = {1: 0.0}
    for k in range(1, kmax):
        alpha[k + 1] = (1.0 - 0.5 / k) * alpha[k]
        beta[k + 1] = beta[k] - (alpha[k] + beta[k]) / (2.0 * k)
    return alpha, beta


@dataclass(frozen=True)
class AxisDensitySeries:
    """Odd-power series of the axis mass (denominator) and of the
    ln-moment (numerator); their ratio estimates lambda_{p,s}(pi/2)."""

    p: float
    order: int
    numerator: SeriesExpansion
    denominator: SeriesExpansion

    def lyapunov(self, s: float) -> LyapunovValue:
        den = self.denominator(s)
        if den == 0.0:
            raise DomainError("vanishing denominator series")
        return LyapunovValue(self.numerator(s) / den, "axis_series")


def axis_density_series(p: float, order: int = 8) -> AxisDensitySeries:
    """Build the axis-density series through layer ``order``; only odd
    layers contribute to the integrated series (even layers are odd
    functions of y)."""
    layers = axis_series_layers(p, order)
    kmax = max(max(d) for d in layers.values())
    al, be = _alpha_beta(kmax)
    num = [0.0] * (order + 1)
    den = [0.0] * (order + 1)
    for n, layer in layers.items():
        if n % 2 == 0:
            continue
        den[n] = 2.0 * sum(c * al[k] for k, c in layer.items())
        num[n] = 2.0 * sum(c * be[k] for k, c in layer.items())
    return AxisDensitySeries(
        p, order,
        SeriesExpansion("axis_density_numerator", tuple(num)),
        SeriesExpansion("axis_density_denominator", tuple(den)))
