"""Monte Carlo side: gamma sampling, the continued-fraction Markov chain,
renormalized matrix products and empirical estimates with batch-means
errors.  Every routine is reproducible from an explicit (seed, stream_id)
pair; independent streams parallelize by id and merge associatively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import DomainError
from .measure import ModelParams

BATCHES_DEFAULT = 50
BATCHES_MIN = 30


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream: same (seed, stream_id) -> same draws;
    distinct stream_ids are statistically independent."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.default_rng([self.seed, self.stream_id])

    def split(self, count: int, base: int = 0):
        return [RngStream(self.seed, self.stream_id + base + i + 1)
                for i in range(count)]


@dataclass(frozen=True)
class EstimateWithError:
    """Point estimate with a batch-means standard error."""

    value: float
    std_error: float
    n_samples: int
    note: str | None = None

    def __post_init__(self):
        if self.std_error < 0:
            raise DomainError("std_error must be >= 0")

    def within(self, target: float, n_sigma: float = 4.0) -> bool:
        return abs(self.value - target) <= n_sigma * self.std_error


def merge_estimates(estimates) -> EstimateWithError:
    """Pool independent stream estimates: sample-count weighted mean with
    the corresponding pooled standard error (associative and
    order-independent up to floating round-off)."""
    estimates = list(estimates)
    if not estimates:
        raise DomainError("nothing to merge")
    n_tot = sum(e.n_samples for e in estimates)
    value = math.fsum(e.value * e.n_samples for e in estimates) / n_tot
    var = math.fsum((e.std_error * e.n_samples) ** 2 for e in estimates)
    return EstimateWithError(value, math.sqrt(var) / n_tot, n_tot)


def sample_gamma(p: float, s: float, rng: RngStream | np.random.Generator,
                 size: int | None = None):
    """Gamma(shape p, scale s) draws; strictly positive (underflowed zeros
    are redrawn, the guard for the measure-zero a = 0 event)."""
    if not (p > 0 and s > 0):
        raise DomainError("gamma parameters must be positive")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    if size is None:
        while True:
            a = float(gen.gamma(p, s))
            if a > 0.0:
                return a
    draws = gen.gamma(p, s, size=size)
    while True:
        bad = draws <= 0.0
        k = int(np.count_nonzero(bad))
        if k == 0:
            return draws
        draws[bad] = gen.gamma(p, s, size=k)


class ProductAccumulator:
    """Running product of 2x2 complex matrices, renormalized by the largest
    entry modulus at every step so the stored matrix keeps O(1) entries;
    the true product is stored_matrix * exp(log_scale)."""

    def __init__(self):
        self.matrix = np.eye(2, dtype=complex)
        self.log_scale = 0.0
        self.steps = 0

    def multiply(self, a: np.ndarray):
        m = self.matrix @ np.asarray(a, dtype=complex)
        scale = float(np.max(np.abs(m)))
        if scale == 0.0:
            raise DomainError("singular factor annihilated the product")
        self.matrix = m / scale
        self.log_scale += math.log(scale)
        self.steps += 1

    def multiply_ray(self, a: float, alpha: float):
        """Right-multiply by [[0, 1], [1, a e^{i alpha}]]."""
        q = a * complex(math.cos(alpha), math.sin(alpha))
        self.multiply(np.array([[0.0, 1.0], [1.0, q]], dtype=complex))

    def norm(self) -> float:
        """Operator (spectral) norm of the stored, renormalized matrix."""
        return float(np.linalg.norm(self.matrix, 2))

    def log_norm(self) -> float:
        """ln of the true product's operator norm."""
        return self.log_scale + math.log(self.norm())

    def growth_rate(self) -> float:
        if self.steps == 0:
            raise DomainError("empty product")
        return self.log_norm() / self.steps


@dataclass(frozen=True)
class ChainResult:
    """Final state of the continued-fraction chain plus, optionally, the
    post-burn-in trajectory."""

    final: complex
    trajectory: np.ndarray | None
    params: ModelParams
    stream: RngStream
    burn_in: int


def _z0_default(params: ModelParams) -> complex:
    return 1j if params.on_axis else 1.0 + 0.0j


def iterate_chain(params: ModelParams, z0: complex | None, n: int,
                  rng: RngStream, burn_in: int = 0,
                  keep_trajectory: bool = True) -> ChainResult:
    """Run z_k = 1/(z_{k-1} + a_k e^{i alpha}) for n + burn_in steps from
    z0 (in the cone; purely imaginary when |alpha| = pi/2).

    On the axis the iteration runs in the real coordinate Y with
    Y_k = -1/(sign(alpha) a_k + Y_{k-1}), avoiding complex round-off.
    """
    z0 = _z0_default(params) if z0 is None else complex(z0)
    if n < 1 or burn_in < 0:
        raise DomainError("need n >= 1, burn_in >= 0")
    total = n + burn_in
    gen = rng.generator()
    a = sample_gamma(params.p, params.s, gen, size=total)
    if params.on_axis:
        if z0.real != 0.0:
            raise DomainError("axis chain needs a purely imaginary start")
        out = np.empty(total)
        _kernels.chain_axis(a, math.copysign(1.0, params.alpha),
                            z0.imag, out)
        traj = 1j * out[burn_in:]
    else:
        if abs(np.angle(z0)) > abs(params.alpha):
            raise DomainError("z0 outside the cone S_alpha")
        out_re = np.empty(total)
        out_im = np.empty(total)
        _kernels.chain_cone(a, math.cos(params.alpha), math.sin(params.alpha),
                            z0.real, z0.imag, out_re, out_im)
        traj = out_re[burn_in:] + 1j * out_im[burn_in:]
    return ChainResult(complex(traj[-1]), traj if keep_trajectory else None,
                       params, rng, burn_in)


def _batch_stats(increments: np.ndarray, batches: int):
    """Batch-means standard error of the mean of an increment array."""
    n = increments.size
    if batches < BATCHES_MIN:
        raise DomainError(f"need >= {BATCHES_MIN} batches")
    m = n // batches
    used = increments[:m * batches].reshape(batches, m)
    means = used.mean(axis=1)
    return float(np.std(means, ddof=1) / math.sqrt(batches))


def furstenberg_estimate(params: ModelParams, n: int, rng: RngStream,
                         batches: int = BATCHES_DEFAULT) -> EstimateWithError:
    """(1/n) ln ||A_1(alpha) ... A_n(alpha)|| with per-step renormalization;
    converges a.s. to the Lyapunov exponent.  Standard error from batch
    means of the extracted log factors."""
    if n < 10_000:
        raise DomainError("furstenberg_estimate needs n >= 1e4")
    gen = rng.generator()
    a = sample_gamma(params.p, params.s, gen, size=n)
    logs = np.empty(n)
    m11, m12, m21, m22 = _kernels.matrix_product_logs(
        a, math.cos(params.alpha), math.sin(params.alpha), logs)
    stored = np.array([[m11, m12], [m21, m22]])
    lam = (float(np.sum(logs)) + math.log(np.linalg.norm(stored, 2))) / n
    return EstimateWithError(lam, _batch_stats(logs, batches), n)


def chain_log_modulus_average(params: ModelParams, n: int, rng: RngStream,
                              burn_in: int = 1000,
                              batches: int = BATCHES_DEFAULT) -> EstimateWithError:
    """Ergodic-average route: -(1/n) sum ln|Z_k| over the stationary chain
    also converges to the Lyapunov exponent."""
    res = iterate_chain(params, None, n, rng, burn_in=burn_in)
    vals = -np.log(np.abs(res.trajectory))
    se = _batch_stats(vals, batches)
    return EstimateWithError(float(vals.mean()), se, n)


# ---------------------------------------------------------------------------
# empirical measure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeGrid:
    """Binning for (r, theta) on the cone."""

    r_edges: tuple
    theta_edges: tuple


@dataclass(frozen=True)
class AxisGrid:
    """Binning for y = Im z on the axis."""

    y_edges: tuple


@dataclass(frozen=True)
class Histogram:
    """Normalized histogram of chain iterates; mass sums to the fraction of
    samples inside the grid (1 when the grid covers the support)."""

    kind: str  # 'cone' or 'axis'
    edges: tuple  # (r_edges, theta_edges) or (y_edges,)
    mass: np.ndarray
    n_samples: int
    params: ModelParams
    stream: RngStream
    burn_in: int

    def metadata(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.params.p,
            "s": self.params.s,
            "alpha": self.params.alpha,
            "n_samples": self.n_samples,
            "burn_in": self.burn_in,
            "seed": self.stream.seed,
            "stream_id": self.stream.stream_id,
        }

    def rows(self):
        """Flat (bin_lo, bin_hi, mass) rows; the 2-D cone histogram emits
        (r_lo, r_hi, theta_lo, theta_hi, mass)."""
        if self.kind == "axis":
            y = self.edges[0]
            for i in range(len(y) - 1):
                yield (y[i], y[i + 1], float(self.mass[i]))
        else:
            r, th = self.edges
            for i in range(len(r) - 1):
                for j in range(len(th) - 1):
                    yield (r[i], r[i + 1], th[j], th[j + 1],
                           float(self.mass[i, j]))


def empirical_measure(params: ModelParams, n: int, burn_in: int,
                      grid: ConeGrid | AxisGrid,
                      rng: RngStream) -> Histogram:
    """Histogram of post-burn-in iterates in cone coordinates (r, theta),
    or in y on the axis."""
    if n <= burn_in:
        raise DomainError("need n > burn_in")
    res = iterate_chain(params, None, n, rng, burn_in=burn_in)
    traj = res.trajectory
    if isinstance(grid, AxisGrid):
        if not params.on_axis:
            raise DomainError("axis grid needs |alpha| = pi/2")
        counts, edges = np.histogram(traj.imag, bins=np.asarray(grid.y_edges))
        return Histogram("axis", (tuple(edges),), counts / traj.size,
                         traj.size, params, rng, burn_in)
    th_edges = np.asarray(grid.theta_edges)
    if np.any(np.abs(th_edges) > abs(params.alpha) + 1e-12):
        raise DomainError("theta grid extends outside the cone")
    counts, re, te = np.histogram2d(np.abs(traj), np.angle(traj),
                                    bins=[np.asarray(grid.r_edges), th_edges])
    return Histogram("cone", (tuple(re), tuple(te)), counts / traj.size,
                     traj.size, params, rng, burn_in)
