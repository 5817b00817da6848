"""Exception hierarchy."""


class DualElastError(Exception):
    """Base class for all library errors."""


class DtPError(DualElastError):
    """The pointwise dual-to-primal strain equation could not be solved.

    ``index`` holds the flat indices of the offending points when known;
    assembly routines re-raise with element/point location attached.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NoBracket(DtPError):
    """The strain equation has the same sign at both ends of the search bracket."""


class NonMonotone(DtPError):
    """The strain equation is not strictly increasing on the search bracket."""


class SingularDerivative(DtPError):
    """Implicit derivative requested where the strain equation is flat."""


class NewtonError(DualElastError):
    """Newton-Raphson failure; ``report`` holds the iteration history."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SingularJacobian(NewtonError):
    pass


class Diverged(NewtonError):
    pass


class MaxIterations(NewtonError):
    pass


class DtPFailure(NewtonError):
    """A DtP error raised while evaluating the residual or Jacobian."""


class UnknownCase(DualElastError, KeyError):
    pass


class RegimeMismatch(DualElastError, ValueError):
    """Dual point is outside the regime a witness construction applies to."""


class ConfigError(DualElastError, ValueError):
    """Invalid run configuration; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
