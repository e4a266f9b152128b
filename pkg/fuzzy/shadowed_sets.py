import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np

from core.errors import EmptyUniverse, OutOfRange
from fuzzy.fuzzy_sets import ScalarFuzzySet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThresholdPair:
    """Shadow thresholds with 0 <= beta < 0.5 < alpha <= 1."""
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 <= self.beta < 0.5 < self.alpha <= 1.0):
            raise OutOfRange(
                f"thresholds need 0 <= beta < 0.5 < alpha <= 1, got alpha={self.alpha}, beta={self.beta}"
            )


class ShadowValue(Enum):
    """Membership of an object in a shadowed set: 0, the whole unit interval, or 1."""
    ZERO = "0"
    UNIT = "[0,1]"
    ONE = "1"

    @property
    def region(self) -> str:
        return _REGION_NAMES[self]

    @property
    def codebook(self) -> float:
        """Value of the region once the shadow is replaced by 0.5."""
        return _CODEBOOK[self]


_REGION_NAMES = {ShadowValue.ONE: "elevate", ShadowValue.ZERO: "reduce", ShadowValue.UNIT: "shadow"}
_CODEBOOK = {ShadowValue.ONE: 1.0, ShadowValue.ZERO: 0.0, ShadowValue.UNIT: 0.5}
REGIONS = ("elevate", "reduce", "shadow")


@dataclass(frozen=True)
class RegionErrors:
    elevated: float
    reduced: float
    shadow: float
    shadow_half: float


def _region_masks(grades: np.ndarray, thresholds: ThresholdPair) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    # elevation wins over reduction; beta < alpha keeps them disjoint anyway
    elevated = grades >= thresholds.alpha
    reduced = (grades <= thresholds.beta) & ~elevated
    shadow = ~(elevated | reduced)
    return elevated, reduced, shadow


def shadow_assign(m: float, thresholds: ThresholdPair) -> ShadowValue:
    """One if m >= alpha, Zero if m <= beta, Unit otherwise."""
    if m >= thresholds.alpha:
        return ShadowValue.ONE
    if m <= thresholds.beta:
        return ShadowValue.ZERO
    return ShadowValue.UNIT


def region_errors(fuzzy_set: ScalarFuzzySet, thresholds: ThresholdPair) -> RegionErrors:
    """
    Errors of the shadowed approximation.

    Returns:
        RegionErrors with
          elevated    = Σ_{m >= α} (1 - m)
          reduced     = Σ_{m <= β} m
          shadow      = Σ_{β < m < α} ((1 - m) + m), one per shadow object
          shadow_half = Σ_{β < m < α} |m - 0.5|
    """
    m = fuzzy_set.as_array()
    elevated, reduced, shadow = _region_masks(m, thresholds)
    return RegionErrors(
        elevated=float(np.sum(1.0 - m[elevated])),
        reduced=float(np.sum(m[reduced])),
        shadow=float(np.sum((1.0 - m[shadow]) + m[shadow])),
        shadow_half=float(np.sum(np.abs(m[shadow] - 0.5))),
    )


def objective_v(fuzzy_set: ScalarFuzzySet, thresholds: ThresholdPair) -> float:
    """Balance objective V = |Σ_{m>=α}(1-m) + Σ_{m<=β} m - Card(shadow)|."""
    m = fuzzy_set.as_array()
    elevated, reduced, shadow = _region_masks(m, thresholds)
    gain = float(np.sum(1.0 - m[elevated])) + float(np.sum(m[reduced]))
    return abs(gain - float(np.count_nonzero(shadow)))


def objective_v_balanced(fuzzy_set: ScalarFuzzySet, alpha: float) -> float:
    """V with beta tied to 1 - alpha."""
    if not 0.5 < alpha <= 1.0:
        raise OutOfRange(f"alpha must lie in (0.5, 1], got {alpha}")
    return objective_v(fuzzy_set, ThresholdPair(alpha, 1.0 - alpha))


def balanced_candidates(fuzzy_set: ScalarFuzzySet) -> np.ndarray:
    """
    Candidate alphas in (0.5, 1] covering every region configuration of V.

    V only changes where alpha crosses a grade above 0.5 or 1 - alpha crosses
    a grade below 0.5, so the breakpoints, their float neighbours and the
    midpoints between consecutive points hit every constant piece.
    """
    m = fuzzy_set.as_array()
    breaks = np.concatenate([m[m > 0.5], 1.0 - m[m < 0.5]])
    points = np.concatenate([
        breaks,
        np.nextafter(breaks, 0.0),
        np.nextafter(breaks, 2.0),
        [np.nextafter(0.5, 1.0), 1.0],
    ])
    points = np.unique(points[(points > 0.5) & (points <= 1.0)])
    midpoints = (points[:-1] + points[1:]) / 2.0
    return np.unique(np.concatenate([points, midpoints]))


def optimize_thresholds_balanced(fuzzy_set: ScalarFuzzySet) -> Tuple[float, float]:
    """
    Minimise V over alpha in (0.5, 1] with beta = 1 - alpha.

    Args:
        fuzzy_set: non-empty scalar fuzzy set

    Returns:
        (alpha, V) with the smallest alpha among the minimisers.

    Raises:
        EmptyUniverse: if the set has no objects.
    """
    if len(fuzzy_set) == 0:
        raise EmptyUniverse("cannot optimise thresholds of an empty universe")
    best_alpha, best_v = None, None
    # candidates are sorted, so strict < keeps the smallest alpha on ties
    for alpha in balanced_candidates(fuzzy_set):
        v = objective_v_balanced(fuzzy_set, float(alpha))
        if best_v is None or v < best_v:
            best_alpha, best_v = float(alpha), v
    logger.debug("balanced optimum alpha=%r V=%r over %d objects", best_alpha, best_v, len(fuzzy_set))
    return best_alpha, best_v


def approx_three_way(m: float, thresholds: ThresholdPair) -> float:
    """Three-way approximation: 1 if m >= alpha, 0 if m <= beta, 0.5 otherwise."""
    return shadow_assign(m, thresholds).codebook


def per_object_error(m: float, thresholds: ThresholdPair) -> float:
    """Distance from m to the codebook value of its region."""
    if m >= thresholds.alpha:
        return 1.0 - m
    if m <= thresholds.beta:
        return m
    if m <= 0.5:
        return 0.5 - m
    return m - 0.5


def total_error(fuzzy_set: ScalarFuzzySet, thresholds: ThresholdPair) -> float:
    return float(sum(per_object_error(m, thresholds) for m in fuzzy_set.grades))


def error_optimal_thresholds() -> ThresholdPair:
    """
    Thresholds under which every object goes to its closest codebook value.

    Equal unit costs for all four moves give alpha = 3/4 and beta = 1/4.
    """
    return ThresholdPair(0.75, 0.25)


def shadow_partition(fuzzy_set: ScalarFuzzySet, thresholds: ThresholdPair) -> Dict[str, List[str]]:
    """Object ids per region, each list in universe order."""
    partition = {region: [] for region in REGIONS}
    for object_id, m in fuzzy_set:
        partition[shadow_assign(m, thresholds).region].append(object_id)
    return partition


def region_cardinalities(fuzzy_set: ScalarFuzzySet, thresholds: ThresholdPair) -> Dict[str, int]:
    return {region: len(ids) for region, ids in shadow_partition(fuzzy_set, thresholds).items()}
