"""Trapezoidal quadrature with step halving for integrands mapped to a
doubly-exponentially decaying form, plus the shared tolerance config.

The workhorse is :func:`refine_trapezoid`: integrands here are analytic and
decay (super-)exponentially on the truncated line, so the trapezoidal sum
converges geometrically in 1/h and halving the step until two successive
estimates agree gives a cheap, reliable error control.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, QuadratureFailure

DEFAULT_TOL_ENV = "RMPROD_DEFAULT_TOL"


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and refinement budget for the adaptive rules."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_refinements: int = 12

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be >= 1")


def default_config() -> QuadratureConfig:
    """Default tolerances; RMPROD_DEFAULT_TOL overrides both tolerances."""
    tol = os.environ.get(DEFAULT_TOL_ENV)
    if tol:
        t = float(tol)
        return QuadratureConfig(abs_tol=t, rel_tol=t)
    return QuadratureConfig()


def refine_trapezoid(f, lo, hi, cfg: QuadratureConfig, h0=0.5, scale=None):
    """Trapezoidal rule on [lo, hi], halving h until two successive
    estimates agree within tolerance.

    ``f`` must accept a numpy array of nodes.  ``scale``, when given, is the
    magnitude against which rel_tol is judged (otherwise the running
    estimate's own magnitude).  Raises QuadratureFailure carrying the last
    two estimates if the budget is exhausted.
    """
    h = h0
    estimates = []
    for _ in range(cfg.max_refinements + 1):
        nodes = np.arange(lo, hi + 0.5 * h, h)
        vals = f(nodes)
        est = h * (np.sum(vals) - 0.5 * (vals[0] + vals[-1]))
        estimates.append(est)
        if len(estimates) >= 2:
            ref = abs(est) if scale is None else scale
            if abs(est - estimates[-2]) <= max(cfg.abs_tol, cfg.rel_tol * ref):
                return est
        h *= 0.5
    raise QuadratureFailure(
        f"no convergence after {cfg.max_refinements} refinements",
        estimates=tuple(estimates[-2:]))
