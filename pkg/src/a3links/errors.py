"""Exception hierarchy.

Every domain error derives from DomainError so the CLI can map the whole
family to exit status 1.
"""

from __future__ import annotations


class DomainError(ValueError):
    """A precondition of a library operation was violated."""


class ZeroSlopePair(DomainError):
    pass


class EqualSlopes(DomainError):
    pass


class NegativeDenominatorInput(DomainError):
    pass


class NonUnimodularMatrix(DomainError):
    pass


class SlopeOutOfRange(DomainError):
    pass


class ZeroInput(DomainError):
    pass


class RegionMismatch(DomainError):
    pass


class UnsupportedDecoration(DomainError):
    pass


class SingularMatrix(DomainError):
    pass


class ParameterOutOfRange(DomainError):
    pass


class ConsistencyFailure(DomainError):
    """The count engine and the rotation tables disagree.

    This signals a data error and is never corrected automatically.
    """


class TableDataError(DomainError):
    """The rotation-table data file is malformed."""
