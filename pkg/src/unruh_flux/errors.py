"""Exception hierarchy shared by all modules."""


class UnruhFluxError(Exception):
    """Base class for every error raised by this package."""


class DomainError(UnruhFluxError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ParameterError(UnruhFluxError, ValueError):
    """Invalid physical or numerical parameters."""


class BoundaryPoint(DomainError):
    """Point lies on a null horizon (u = 0 or v = 0)."""


class OnTrajectory(DomainError):
    """Point lies on the accelerated trajectory within the lambda tolerance."""


class TooCloseToSingularSet(DomainError):
    """Point falls inside a guard band around a horizon or the trajectory."""


class RangeLimit(DomainError):
    """Log-phase too large for the frequency quadrature."""


class ContractError(UnruhFluxError, RuntimeError):
    """A caller-side precondition of an internal routine was violated."""


class ConvergenceFailure(UnruhFluxError, RuntimeError):
    """Quadrature did not reach its tolerance.

    The best available estimate and its error are kept on the exception so
    callers can decide whether a partial result is still useful.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
