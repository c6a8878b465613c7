"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations

import math


class ConsLawError(Exception):
    """Base class for all package errors."""


class EvaluationError(ConsLawError):
    """A function or integrand threw, or produced a non-finite value."""


class UnknownFlux(ConsLawError, KeyError):
    pass


class UnknownInitial(ConsLawError, KeyError):
    pass


class InvalidParam(ConsLawError, ValueError):
    pass


class NoAdmissibleContour(ConsLawError):
    """No circle around ``x`` satisfies the admissibility constraints.

    ``best_margin`` is the largest strict margin ``R - max|t c(u0(z))|`` seen
    during the radius scan. Slightly negative values indicate a point close to
    the admissibility frontier; large negative values one far beyond it.
    """

    def __init__(self, message: str, best_margin: float = -math.inf, reason: str = ""):
        super().__init__(message)
        self.best_margin = best_margin
        self.reason = reason


class InadmissibleContour(ConsLawError):
    """A user-supplied contour violates ``|z - x| > |F(z)|`` at some node."""


class QuadratureNotConverged(ConsLawError):
    def __init__(self, message: str, nodes: int = 0, change: float = math.nan):
        super().__init__(message)
        self.nodes = nodes
        self.change = change


class TZero(ConsLawError, ValueError):
    """The celerity formula carries a 1/t prefactor and is undefined at t = 0."""


class SeriesDiverging(ConsLawError):
    pass


class NotConverged(ConsLawError):
    pass


class MultipleRoots(ConsLawError):
    """The characteristic foot is not unique (t at or beyond breaking)."""

    def __init__(self, message: str, sign_changes: int = 0):
        super().__init__(message)
        self.sign_changes = sign_changes


class ConfigError(ConsLawError, ValueError):
    pass
