"""Exception types raised by the evaluators."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(OverflowError):
    """Result (or an intermediate) is not representable in double precision."""


class AccuracyError(ArithmeticError):
    """Requested accuracy could not be certified within the work limits."""


class GeometryError(ValueError):
    """A point lies on (or too close to) an integration contour or singular set."""
