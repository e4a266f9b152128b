import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

from core.errors import InvertedBounds, NegativeScale, NonPositiveLoss, OutOfRange

# Default snapping distance for possibility-degree ratios near 0 and 1.
DEFAULT_EPSILON = 1e-9


class IntervalRole(Enum):
    GENERIC = "generic"
    MEMBERSHIP = "membership"
    LOSS = "loss"


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi]. Zero width is allowed and stands for a scalar."""
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise OutOfRange(f"interval bounds must be finite, got [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise InvertedBounds(self.lo, self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def as_list(self) -> list:
        return [self.lo, self.hi]

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


class Theta(float):
    """The θ of the m_θ reduction, a real in [0, 1]."""

    def __new__(cls, value: float):
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise OutOfRange(f"theta must lie in [0, 1], got {value}")
        return super().__new__(cls, value)


class PossibilityDegree(float):
    """Degree to which one interval exceeds another, a real in [0, 1]."""

    def __new__(cls, value: float):
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise OutOfRange(f"possibility degree must lie in [0, 1], got {value}")
        return super().__new__(cls, value)


def make_interval(lo: float, hi: float, role: IntervalRole = IntervalRole.GENERIC) -> Interval:
    """
    Build a validated interval.

    Args:
        lo: lower bound
        hi: upper bound
        role: MEMBERSHIP intervals must sit inside [0, 1]; LOSS intervals need lo > 0.

    Returns:
        The Interval [lo, hi].

    Raises:
        InvertedBounds: if lo > hi.
        OutOfRange: if a membership interval leaves [0, 1] or a bound is not finite.
        NonPositiveLoss: if a loss interval has lo <= 0.
    """
    lo, hi = float(lo), float(hi)
    interval = Interval(lo, hi)
    if role is IntervalRole.MEMBERSHIP and (lo < 0.0 or hi > 1.0):
        raise OutOfRange(f"membership interval {interval} is not inside [0, 1]")
    if role is IntervalRole.LOSS and lo <= 0.0:
        raise NonPositiveLoss(f"loss interval {interval} must have a strictly positive lower bound")
    return interval


def as_theta(theta: Union[Theta, float]) -> Theta:
    return theta if isinstance(theta, Theta) else Theta(theta)


def m_theta(interval: Interval, theta: Union[Theta, float]) -> float:
    """
    Reduce an interval to the scalar (1-θ)·lo + θ·hi.

    Evaluated as lo + θ·(hi - lo), which stays monotone in θ under rounding;
    θ = 0, θ = 1 and zero-width intervals return a bound unchanged.
    """
    t = float(as_theta(theta))
    if t == 0.0 or interval.is_degenerate:
        return interval.lo
    if t == 1.0:
        return interval.hi
    value = interval.lo + t * (interval.hi - interval.lo)
    return min(max(value, interval.lo), interval.hi)


def scale(interval: Interval, c: float) -> Interval:
    """Multiply both bounds by a non-negative factor."""
    c = float(c)
    if not math.isfinite(c):
        raise OutOfRange(f"scale factor must be finite, got {c}")
    if c < 0.0:
        raise NegativeScale(f"cannot scale {interval} by negative factor {c}")
    return Interval(c * interval.lo, c * interval.hi)


def _raw_degree(x: Interval, y: Interval, tolerance: float) -> float:
    spread = x.width + y.width
    if spread == 0.0:
        # both degenerate: plain point order
        if x.lo > y.lo:
            return 1.0
        if x.lo == y.lo:
            return 0.5
        return 0.0
    if math.isinf(spread):
        # halving is exact and keeps the sum of two huge widths finite
        ratio = (0.5 * y.hi - 0.5 * x.lo) / (0.5 * x.width + 0.5 * y.width)
    else:
        ratio = (y.hi - x.lo) / spread
    if ratio >= 1.0 - tolerance:
        return 0.0
    if ratio <= tolerance:
        return 1.0
    return 1.0 - ratio


def possibility_degree(x: Interval, y: Interval, tolerance: float = DEFAULT_EPSILON) -> PossibilityDegree:
    """
    Degree of possibility that x >= y.

    p = max(1 - max((y.hi - x.lo) / (width(x) + width(y)), 0), 0), with two
    zero-width intervals compared by point order (1, 0.5 or 0).

    Args:
        x: left interval
        y: right interval
        tolerance: ratios within this distance of 0 or 1 are clamped to the
            boundary; 0 evaluates the formula verbatim.

    Returns:
        PossibilityDegree in [0, 1]. possibility_degree(x, y) + possibility_degree(y, x)
        is exactly 1.
    """
    if not 0.0 <= tolerance < 0.5:
        raise OutOfRange(f"tolerance must lie in [0, 0.5), got {tolerance}")
    if (x.lo, x.hi) <= (y.lo, y.hi):
        q = _raw_degree(x, y, tolerance)
        # round-trip through the complement so the pair sums to exactly 1
        return PossibilityDegree(1.0 - (1.0 - q))
    q = _raw_degree(y, x, tolerance)
    return PossibilityDegree(1.0 - (1.0 - (1.0 - q)))
