from typing import Optional


class ThreeWayError(ValueError):
    """Base class for every validation failure raised by this package."""


class InvertedBounds(ThreeWayError):
    """An interval was given with lo > hi."""

    def __init__(self, lo: float, hi: float, where: str = ""):
        self.lo = lo
        self.hi = hi
        prefix = f"{where}: " if where else ""
        super().__init__(f"{prefix}inverted interval bounds [{lo}, {hi}] (lo must be <= hi)")


class OutOfRange(ThreeWayError):
    """A membership grade left the unit interval."""


class NegativeScale(ThreeWayError):
    """An interval was scaled by a negative factor."""


class EmptyUniverse(ThreeWayError):
    """An operation that needs at least one object got none."""


class ConditionViolation(ThreeWayError):
    """A loss profile breaks one of the conditions c1, c2 or c3."""

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"{condition}: {message}")


class NonPositiveLoss(ThreeWayError):
    """A loss value or loss interval bound is not strictly positive."""


class DuplicateId(ThreeWayError):
    """The same object id appears twice in one universe."""


class ParseError(ThreeWayError):
    """Input text could not be parsed.

    Args:
        message: what went wrong
        row: 1-based data row (header not counted), if known
        column: offending column or key, if known
    """

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column '{column}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


class MissingInput(ThreeWayError):
    """A subcommand was run without an input it needs."""
