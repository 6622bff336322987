"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class UnsupportedRegimeError(DomainError):
    """Parameters describe a regime the formulas do not cover (e.g. gamma
    infinite horizon with c*delta <= 1)."""


class QuadratureError(RuntimeError):
    """Adaptive integration did not reach the requested tolerance.

    Carries the best available partial value and its error estimate so
    callers can decide whether the partial answer is still usable.
    """

    def __init__(self, message, value=None, err_est=None):
        super().__init__(message)
        self.value = value
        self.err_est = err_est


class TailTruncationError(QuadratureError):
    """The tail bound of a semi-infinite integral never fell below the
    configured cutoff within the doubling budget."""


class InversionError(RuntimeError):
    """Root bracketing for the inverse Laplace exponent failed: the target
    level is not attained within the bracket-growth budget."""


class MCBudgetError(RuntimeError):
    """A Monte Carlo job exceeds the declared path x step budget."""

    def __init__(self, message, n_paths_achieved=0):
        super().__init__(message)
        self.n_paths_achieved = n_paths_achieved
