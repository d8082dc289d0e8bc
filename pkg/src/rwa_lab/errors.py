"""Exception types shared across the package."""


class RwaLabError(Exception):
    """Base class for all rwa-lab errors."""


class ParseError(RwaLabError, ValueError):
    """A textual spec (atom list, distribution token, grid) could not be parsed."""


class SchemeError(RwaLabError, ValueError):
    """Invalid multiplicity vector or cut-index sequence."""


class PoleError(RwaLabError, ValueError):
    """Series expansion requested at (or within the guard band of) a pole."""


class OrderMismatchError(RwaLabError, ValueError):
    """Series operands have different truncation orders, or a Taylor provider
    returned fewer coefficients than the requested order."""


class ConditioningError(RwaLabError, ArithmeticError):
    """Catastrophic cancellation detected: tied atoms, or a kernel sum that
    left the admissible [0, 1] band by more than the tolerance."""


class SupportDomainError(RwaLabError, ValueError):
    """Evaluation point on or too close to the support of a distribution."""


class QuadratureAccuracyError(RwaLabError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested accuracy.

    Carries the best available estimate so callers can decide whether to
    proceed anyway.
    """

    def __init__(self, message, estimate=None, achieved_error=None):
        super().__init__(message)
        self.estimate = estimate
        self.achieved_error = achieved_error


class BudgetError(RwaLabError, ValueError):
    """Evaluation budget too small for the requested method."""


class MeanlessMarginalError(RwaLabError, ValueError):
    """Marginal without a finite mean fed into a law-of-large-numbers
    experiment (the summability hypothesis E|X| < inf fails)."""
