"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`BarrierInverseError`, so callers can catch the family at once.  The
CLI maps :class:`ConfigError` subclasses to exit code 2 and everything else
to exit code 3.
"""


class BarrierInverseError(Exception):
    """Base class for all package errors."""


class ConfigError(BarrierInverseError, ValueError):
    """Malformed input that is detected before any numerics run."""


class InvalidInterval(ConfigError):
    pass


class InvalidGrid(ConfigError):
    pass


class ShapeMismatch(ConfigError):
    pass


class NumericalError(BarrierInverseError):
    """A computation started but could not deliver a trustworthy result."""


class NonConvergence(NumericalError):
    pass


class OutOfDomain(NumericalError, ValueError):
    pass


class DomainError(NumericalError, ValueError):
    pass


class EnergyOutOfRange(NumericalError, ValueError):
    pass


class BracketFailure(NumericalError):
    pass


class GridTooCoarse(NumericalError):
    pass


class NonMonotoneData(NumericalError):
    pass


class NonMonotoneResult(NumericalError):
    pass


class BranchOverlap(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass
