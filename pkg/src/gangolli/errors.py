"""Exceptions and warnings raised by the gangolli package."""


class GangolliError(Exception):
    """Base class for all package errors."""


class AngleTooLarge(GangolliError):
    """Rotation angle too close to pi for the logarithm to be well defined."""


class NotInSubgroup(GangolliError):
    """Group element does not fix the north pole."""


class DomainError(GangolliError, ValueError):
    pass


class InsufficientGrid(GangolliError, ValueError):
    pass


class TooCloseToPole(GangolliError, ValueError):
    pass


class InvalidMeasure(GangolliError):
    """A Levy measure failed one or more admissibility conditions.

    The failing conditions are listed in ``failures``; the full report (if any)
    is attached as ``report``.
    """

    def __init__(self, failures, report=None):
        self.failures = list(failures)
        self.report = report
        super().__init__("invalid Levy measure: " + "; ".join(self.failures))


class FirstMomentViolation(GangolliError):
    pass


class TruncationTooCoarse(GangolliError):
    pass


class NotInvariant(GangolliError):
    """Matrix field fails the Ad(K) commutant test at a witness ``(g, k)``."""

    def __init__(self, message, g=None, k=None, residual=None):
        self.g = g
        self.k = k
        self.residual = residual
        super().__init__(message)


class InfiniteActivity(GangolliError):
    """Simulation requested for a Levy measure of infinite total mass."""


class DivergenceWarning(RuntimeWarning):
    pass
