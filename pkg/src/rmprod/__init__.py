"""Invariant measures and Lyapunov exponents for products of random
SL(2, C) matrices whose random entry is gamma-distributed along a ray
e^{i alpha} in the right half-plane.

Closed-form results (densities, normalization constants, moments, the
Bessel-ratio Lyapunov exponent and its asymptotic expansions) live beside a
Monte Carlo engine for the underlying continued-fraction Markov chain, so
every formula can be cross-validated numerically; ``rmprod verify`` runs
the whole suite.
"""

__version__ = "0.1.0"

from .bessel import (MacdonaldIndex, bessel_jy, bessel_k, bessel_k_dorder,
                     digamma, macdonald_integral)
from .exceptions import (ConsistencyError, DegenerateRecurrenceError,
                         DegenerateTableError, DomainError, NoisyFitWarning,
                         NumericsError, PoleError, QuadratureFailure,
                         UnsupportedMomentError, UnsupportedOrderError)
from .lyapunov import (AxisDensitySeries, LyapunovValue, SeriesExpansion,
                       asympt_large_s, asympt_small_s, axis_density_series,
                       lambda_recurrence, lloyd_lyapunov, lyapunov_exact,
                       lyapunov_from_measure, lyapunov_integer, pade_resum,
                       small_s_coefficients)
from .measure import (ConePoint, InvariantMeasure, ModelParams, MomentResult,
                      axis_stationary_residual, cone_integrate, density_axis,
                      density_cone, density_dyson, density_gig, moment,
                      normalization_constant, stationary_residual)
from .quadrature import QuadratureConfig, default_config
from .schrodinger import (LocalizationResult, TransferMatrix,
                          localization_rate, wavefunction_growth)
from .simulate import (AxisGrid, ChainResult, ConeGrid, EstimateWithError,
                       Histogram, ProductAccumulator, RngStream,
                       empirical_measure, furstenberg_estimate, iterate_chain,
                       merge_estimates, sample_gamma)
from .stieltjes import (StieltjesDraw, convergent, convergent_sequence,
                        map_to_ray_parameters, rate_estimate)

__all__ = [
    "__version__",
    "AxisDensitySeries", "AxisGrid", "ChainResult", "ConeGrid", "ConePoint",
    "ConsistencyError", "DegenerateRecurrenceError", "DegenerateTableError",
    "DomainError", "EstimateWithError", "Histogram", "InvariantMeasure",
    "LocalizationResult", "LyapunovValue", "MacdonaldIndex", "ModelParams",
    "MomentResult", "NoisyFitWarning", "NumericsError", "PoleError",
    "ProductAccumulator", "QuadratureConfig", "QuadratureFailure",
    "RngStream", "SeriesExpansion", "StieltjesDraw", "TransferMatrix",
    "UnsupportedMomentError", "UnsupportedOrderError",
    "asympt_large_s", "asympt_small_s", "axis_density_series",
    "axis_stationary_residual", "bessel_jy", "bessel_k", "bessel_k_dorder",
    "cone_integrate", "convergent", "convergent_sequence", "default_config",
    "density_axis", "density_cone", "density_dyson", "density_gig",
    "digamma", "empirical_measure", "furstenberg_estimate", "iterate_chain",
    "lambda_recurrence", "lloyd_lyapunov", "localization_rate",
    "lyapunov_exact", "lyapunov_from_measure", "lyapunov_integer",
    "macdonald_integral", "map_to_ray_parameters", "merge_estimates",
    "moment", "normalization_constant", "pade_resum", "rate_estimate",
    "sample_gamma", "small_s_coefficients", "stationary_residual",
    "wavefunction_growth",
]
