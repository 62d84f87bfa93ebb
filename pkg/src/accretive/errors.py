"""Exception types raised by the package."""


class AccretiveError(Exception):
    """Base class for all errors raised here."""


class DimensionMismatch(AccretiveError, ValueError):
    pass


class DomainError(AccretiveError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class StepSizeError(AccretiveError, ValueError):
    """A resolvent step is not below the range-condition bound lambda0."""


class ResolventError(AccretiveError, RuntimeError):
    """The inner resolvent solver did not reach its tolerance."""


class BudgetExceeded(AccretiveError, RuntimeError):
    """The iteration count needed for a requested accuracy is too large.

    Attributes
    ----------
    required_n : int
        Number of resolvent compositions the accuracy demands.
    budget : int
        The configured maximum.
    """

    def __init__(self, required_n, budget, message=None):
        self.required_n = int(required_n)
        self.budget = int(budget)
        super().__init__(
            message
            or f"accuracy requires n={self.required_n} compositions, budget is {self.budget}"
        )


class SnapshotMismatch(AccretiveError, ValueError):
    """A certificate's parameter snapshot does not hold for the instance."""


class ConfigError(AccretiveError, ValueError):
    """Malformed problem specification."""
