"""Exception hierarchy.

Every error raised by the library derives from :class:`QsoError`, which is a
``ValueError`` so callers that only care about bad input can catch that.
"""

from __future__ import annotations


class QsoError(ValueError):
    """Base class for all library errors."""


class NegativeCoefficient(QsoError):
    pass


class AsymmetricCoefficient(QsoError):
    pass


class RowSumViolation(QsoError):
    pass


class SimplexViolation(QsoError):
    """A point is not on the 2-simplex within tolerance."""


class ConstraintViolation(QsoError):
    """One of a+b=1, alpha+beta=1, c+d+e=1 fails."""


class OutOfRange(QsoError):
    pass


class DomainViolation(QsoError):
    """A scalar argument lies outside the admissible interval of a branch."""


class NoRootBracketed(QsoError):
    pass


class ToleranceNotReached(QsoError):
    pass


class NotAFixedPoint(QsoError):
    pass


class UndefinedTheta(QsoError):
    pass


class RegimeMismatch(QsoError):
    pass


class ParseError(QsoError):
    pass
