"""Exception types raised across the package."""


class DDLabError(Exception):
    """Base class for all package errors."""


class NonConvergence(DDLabError):
    """An iterative solver exhausted its budget.

    ``last_iterate`` and ``residual_norm`` are attached when the solver has
    something meaningful to report.
    """

    def __init__(self, message, last_iterate=None, residual_norm=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual_norm = residual_norm


class BoundaryMaximizer(DDLabError):
    """A bounded 1-d search ended on the edge of its interval."""


class UnsupportedOrder(DDLabError):
    pass


class SingularRStar(DDLabError):
    """The closed-form squared-norm limit sits on a pole."""


class NegativeRStar(DDLabError):
    pass


class DomainViolation(DDLabError):
    pass


class InvalidR(DDLabError):
    pass


class DimensionMismatch(DDLabError):
    pass


class Diverged(DDLabError):
    pass


class MissingColumn(DDLabError):
    pass


class ConfigError(DDLabError):
    pass
