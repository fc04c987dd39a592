"""Exception hierarchy for numerical failures."""


class NumericsError(Exception):
    """Base class for all numerical failures raised by this package."""


class DomainError(NumericsError, ValueError):
    """Arguments outside the supported domain."""


class QuadratureFailure(NumericsError):
    """Quadrature did not converge within the allowed refinements.

    Carries the last two estimates so callers can judge how far apart the
    refinement levels still were.
    """

    def __init__(self, message, estimates=None):
        super().__init__(message)
        self.estimates = estimates


class ConsistencyError(NumericsError):
    """Two independent evaluation routes disagree beyond tolerance."""


class DegenerateRecurrenceError(NumericsError):
    """Backward recurrence requested at a degenerate point (u^2 == v^2)."""


class UnsupportedMomentError(NumericsError, ValueError):
    """Moment indices outside the implemented range (use conjugation)."""


class UnsupportedOrderError(NumericsError, ValueError):
    """Series order beyond the implemented terms."""


class PoleError(NumericsError):
    """Pade denominator vanishes at the evaluation point."""


class DegenerateTableError(NumericsError):
    """Singular Pade linear system that degree reduction could not repair."""


class NoisyFitWarning(UserWarning):
    """Least-squares slope fit with low R^2; the estimate may be unreliable."""
