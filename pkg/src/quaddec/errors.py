"""Exception hierarchy shared by every module."""


class QuaddecError(Exception):
    """Base class for all library errors."""


class DomainError(QuaddecError, ValueError):
    """Input outside an operation's domain (zero polynomial, bad degree, ...)."""


class DegenerateDataError(QuaddecError, ValueError):
    """A denominator vanishes identically on the target curve."""


class InvalidDomainError(QuaddecError, ValueError):
    """A conformal map fails the quadrature-domain validity checks."""


class PointOutsideDomainError(QuaddecError, ValueError):
    pass


class PoleError(QuaddecError, ZeroDivisionError):
    """Evaluation at a pole. ``principal_part`` holds the Laurent data there.

    ``principal_part`` is a list of ``(order, coeff)`` pairs meaning
    ``coeff * (x - pole)**(-order)`` in the coordinate named by ``coordinate``.
    """

    def __init__(self, message, pole=None, principal_part=None, coordinate="z"):
        super().__init__(message)
        self.pole = pole
        self.principal_part = principal_part or []
        self.coordinate = coordinate


class NotInRSError(QuaddecError, ValueError):
    """Boundary data has a genuine singularity on the curve."""


class IllConditionedPoleError(QuaddecError, ArithmeticError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class UnivalenceError(QuaddecError, ValueError):
    """A truncated map is not univalent on the closed disc; raise the degree."""

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class DegreeBoundError(QuaddecError, ArithmeticError):
    pass


class ConfigError(QuaddecError, ValueError):
    pass


class DegenerateBoundaryPointError(QuaddecError, ValueError):
    pass
