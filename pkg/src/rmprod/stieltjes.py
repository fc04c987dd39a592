"""Random Stieltjes continued fractions, their convergents, and the
measured geometric convergence rate of the (near-diagonal) Pade
approximants they realize.

The error F - F_n decays like exp(-2 lambda n), with lambda the Lyapunov
exponent at the mapped parameters a_n = c_n/sqrt|t|, s = sigma/sqrt|t|,
alpha = -arg(t)/2.  Because the decay quickly drops below double-precision
resolution of F itself, errors are assembled in log scale from the
determinant identity F_{n+1} - F_n = (-1)^n t^n / (B_n B_{n+1}) with
renormalized denominator magnitudes.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import DomainError, NoisyFitWarning
from .simulate import EstimateWithError, RngStream, sample_gamma

PROXY_FACTOR = 4  # F ~ F_{proxy*n_max}: bias e^{-6 lambda n_max} below fit noise
R2_WARN = 0.9


def map_to_ray_parameters(p: float, sigma: float, t: complex):
    """(s, alpha) of the equivalent ray ensemble: sqrt(t) F(t) is the ray
    continued fraction with a_n = c_n/sqrt|t|."""
    t = complex(t)
    return sigma / math.sqrt(abs(t)), -cmath.phase(t) / 2.0


def _check_t(t: complex) -> complex:
    t = complex(t)
    if t.imag == 0.0 and t.real < 0.0:
        raise DomainError("t must avoid the closed negative real axis")
    return t


@dataclass(frozen=True)
class StieltjesDraw:
    """One realization of the random fraction: i.i.d. gamma(p, sigma)
    coefficients c_1..c_N, reproducible from the recorded stream."""

    p: float
    sigma: float
    coeffs: tuple
    stream: RngStream | None = None

    @classmethod
    def sample(cls, p: float, sigma: float, n: int,
               stream: RngStream) -> "StieltjesDraw":
        c = sample_gamma(p, sigma, stream.generator(), size=n)
        return cls(p, sigma, tuple(float(v) for v in c), stream)

    def __len__(self):
        return len(self.coeffs)


def _forward_arrays(draw: StieltjesDraw, t: complex):
    c = np.asarray(draw.coeffs)
    n = c.size
    f_re, f_im = np.empty(n), np.empty(n)
    ln_b = np.empty(n)
    ph_re, ph_im = np.empty(n), np.empty(n)
    _kernels.stieltjes_forward(c, t.real, t.imag, f_re, f_im,
                               ln_b, ph_re, ph_im)
    return f_re + 1j * f_im, ln_b, ph_re + 1j * ph_im


def convergent(draw: StieltjesDraw, n: int, t: complex) -> complex:
    """F_n(t) by the backward recurrence (innermost denominator first);
    an exact intermediate zero falls back to the renormalized forward
    three-term route."""
    t = _check_t(t)
    if not 1 <= n <= len(draw):
        raise DomainError(f"need 1 <= n <= {len(draw)}")
    c = draw.coeffs
    x = complex(c[n - 1])
    fell_through = x == 0.0
    if not fell_through:
        for k in range(n - 2, -1, -1):
            x = c[k] + t / x
            if x == 0.0:
                fell_through = True
                break
    if fell_through:
        return complex(_forward_arrays(draw, t)[0][n - 1])
    return 1.0 / x


def convergent_sequence(draw: StieltjesDraw, t: complex) -> np.ndarray:
    """All convergents F_1..F_N in one renormalized forward sweep."""
    t = _check_t(t)
    return _forward_arrays(draw, t)[0]


def log_errors(draw: StieltjesDraw, t: complex,
               n_lo: int, n_hi: int, n_proxy: int) -> np.ndarray:
    """ln|F_{n_proxy} - F_n| for n = n_lo..n_hi, assembled in log scale
    from the telescoped determinant formula (usable far below the
    double-precision floor of F itself)."""
    t = _check_t(t)
    if not 1 <= n_lo <= n_hi < n_proxy <= len(draw):
        raise DomainError("need 1 <= n_lo <= n_hi < n_proxy <= len(draw)")
    _, ln_b, ph = _forward_arrays(draw, t)
    ln_t, arg_t = math.log(abs(t)) if t != 0 else -math.inf, cmath.phase(t)
    m = np.arange(n_lo, n_proxy)
    # d_m = F_{m+1} - F_m = (-1)^m t^m / (B_m B_{m+1})
    ln_d = m * ln_t - ln_b[m - 1] - ln_b[m]
    ph_d = np.exp(1j * (math.pi + arg_t) * m) / (ph[m - 1] * ph[m])
    out = np.empty(n_hi - n_lo + 1)
    for i, n in enumerate(range(n_lo, n_hi + 1)):
        sel = slice(n - n_lo, None)
        peak = float(np.max(ln_d[sel]))
        total = np.sum(ph_d[sel] * np.exp(ln_d[sel] - peak))
        out[i] = peak + math.log(abs(total))
    return out


def rate_estimate(p: float, sigma: float, t: complex, n_max: int, reps: int,
                  rng: RngStream) -> EstimateWithError:
    """Measured slope of ln|F - F_n| against n (window [n_max/2, n_max],
    proxy F ~ F_{4 n_max}), averaged over independent realizations.

    Converges to -2 lambda_{p, sigma/sqrt|t|}(-arg t / 2); a mean fit
    R^2 < 0.9 raises NoisyFitWarning and annotates the estimate.
    """
    t = _check_t(t)
    if n_max < 50:
        raise DomainError("n_max must be >= 50")
    if reps < 10:
        raise DomainError("reps must be >= 10")
    n_lo, n_hi = n_max // 2, n_max
    ns = np.arange(n_lo, n_hi + 1, dtype=float)
    slopes = np.empty(reps)
    r2s = np.empty(reps)
    for i, stream in enumerate(rng.split(reps)):
        draw = StieltjesDraw.sample(p, sigma, PROXY_FACTOR * n_max, stream)
        le = log_errors(draw, t, n_lo, n_hi, PROXY_FACTOR * n_max)
        slope, intercept = np.polyfit(ns, le, 1)
        fitted = slope * ns + intercept
        ss_res = float(np.sum((le - fitted) ** 2))
        ss_tot = float(np.sum((le - le.mean()) ** 2))
        slopes[i] = slope
        r2s[i] = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    se = float(np.std(slopes, ddof=1) / math.sqrt(reps))
    note = None
    if float(np.mean(r2s)) < R2_WARN:
        note = f"noisy fit: mean R^2 = {np.mean(r2s):.3f} < {R2_WARN}"
        warnings.warn(note, NoisyFitWarning)
    return EstimateWithError(float(np.mean(slopes)), se, reps, note)
