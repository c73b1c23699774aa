"""Exception hierarchy shared by all ptheta modules."""


class ThetaError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(ThetaError):
    """An argument is outside the documented domain of an operation."""


class NonFiniteValue(ThetaError):
    """A computation produced NaN or infinity; no such value escapes the API."""


class TailNotConverged(ThetaError):
    """The term cap was reached before the geometric majorant closed."""


class MajorantDiverges(ThetaError):
    """The geometric majorant cannot close for the given moduli."""


class DivisionByZero(ThetaError):
    """x = 0 passed to a form containing 1/x."""


class NoConvergence(ThetaError):
    """An iteration hit its cap without meeting its residual target."""


class ZeroOnContour(ThetaError):
    """A zero lies too close to an integration contour to count reliably."""


class NotAnInteger(ThetaError):
    """A winding number failed to stabilise at an integer."""


class PathLost(ThetaError):
    """Zero tracking exhausted its subdivision budget (typically a collision)."""


class SingularJacobian(ThetaError):
    """The double-zero Newton system is singular (bad seed or higher-order zero)."""


class AmbiguousModulus(ThetaError):
    """Another zero lies inside the modulus tolerance band of a double zero."""


class ChainBroken(ThetaError):
    """An inequality of the radius-band certificate chain failed.

    Carries the offending row name and, when available, the full report in
    the ``report`` attribute.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotStabilized(ThetaError):
    """Refinement against increasing truncation orders did not settle."""


class ResultantOverflow(ThetaError):
    """A resultant magnitude exceeds the collapsed float range."""
