"""Exception hierarchy shared by all qvortex modules."""

from __future__ import annotations


class QVortexError(Exception):
    """Base class for every error raised by this package."""


class DomainError(QVortexError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(QVortexError, OverflowError):
    """A result overflowed the floating-point range."""


class ConvergenceError(QVortexError):
    """A truncated series or product did not reach the requested tolerance.

    ``achieved_bound`` is the best tail bound obtained before the term
    budget ran out; ``terms_used`` is the number of terms summed.
    """

    def __init__(self, message: str, achieved_bound: float | None = None,
                 terms_used: int | None = None):
        super().__init__(message)
        self.achieved_bound = achieved_bound
        self.terms_used = terms_used


class PoleProximityError(DomainError):
    """Evaluation point is at or too close to a pole of a pole sum.

    ``index`` identifies the pole (the n of -q**n for the q-logarithm pole
    sum, or the lattice shell of an image), ``pole`` its location.
    """

    def __init__(self, message: str, index: int | None = None,
                 pole: complex | None = None):
        super().__init__(message)
        self.index = index
        self.pole = pole


class SingularityError(DomainError):
    """Evaluation at or too close to a vortex (or a coincident vortex pair)."""


class IntegrationAborted(QVortexError):
    """Trajectory integration halted before ``t_end``.

    Carries the partial trajectory computed so far plus a diagnostic reason
    and the time at which integration stopped.
    """

    def __init__(self, message: str, trajectory=None, reason: str = "",
                 time: float = 0.0):
        super().__init__(message)
        self.trajectory = trajectory
        self.reason = reason
        self.time = time
