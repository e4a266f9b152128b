"""
Brute-force reference computations.

Nothing here calls the threshold, row-sum or optimiser code: risks are
evaluated from their literal formulas and every search is exhaustive.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.errors import EmptyUniverse, OutOfRange
from decisions.loss_thresholds import LossProfile
from fuzzy.fuzzy_sets import ScalarFuzzySet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    points: int = 1001
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if self.points < 2:
            raise OutOfRange(f"a grid needs at least 2 points, got {self.points}")
        if not self.lo < self.hi:
            raise OutOfRange(f"grid needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.points - 1)

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points)


def brute_force_decide_grid(m: np.ndarray, losses: LossProfile) -> np.ndarray:
    """Vectorised brute_force_decide over an array of grades."""
    # literal risks; ties: elevate over everything, reduce over shadow
    r_e = (1.0 - m) * losses.lambda_e
    r_r = m * losses.lambda_r
    r_s = np.where(m >= 0.5, (m - 0.5) * losses.lambda_sd, (0.5 - m) * losses.lambda_su)
    elevate = (r_e <= r_r) & (r_e <= r_s)
    reduce = ~elevate & (r_r <= r_s)
    return np.where(elevate, 1.0, np.where(reduce, 0.0, 0.5))


def brute_force_decide(m: float, losses: LossProfile) -> float:
    """Codebook value of the cheapest move, by evaluating every risk."""
    return float(brute_force_decide_grid(np.array([m], dtype=np.float64), losses)[0])


def threshold_scan(losses: LossProfile, grid: GridSpec = GridSpec()) -> Tuple[Optional[float], Optional[float]]:
    """
    Locate the decision boundaries on a grid.

    Returns:
        (alpha_hat, beta_hat): the smallest grid grade >= 0.5 decided 1 and the
        largest grid grade < 0.5 decided 0; None where the grid has no such grade.
    """
    m = grid.values()
    decisions = brute_force_decide_grid(m, losses)
    elevated = m[(m >= 0.5) & (decisions == 1.0)]
    reduced = m[(m < 0.5) & (decisions == 0.0)]
    alpha_hat = float(elevated.min()) if elevated.size else None
    beta_hat = float(reduced.max()) if reduced.size else None
    return alpha_hat, beta_hat


def _balance_terms(grades: np.ndarray, alphas: np.ndarray, betas: np.ndarray):
    # per-alpha elevation error/count and per-beta reduction error/count
    above = grades[None, :] >= alphas[:, None]
    below = grades[None, :] <= betas[:, None]
    elevation = np.sum(np.where(above, 1.0 - grades[None, :], 0.0), axis=1)
    reduction = np.sum(np.where(below, grades[None, :], 0.0), axis=1)
    return elevation, above.sum(axis=1), reduction, below.sum(axis=1)


def exhaustive_v_scan(fuzzy_set: ScalarFuzzySet, grid: GridSpec = GridSpec(10001, 0.5, 1.0)) -> Tuple[float, float]:
    """
    Scan V over the grid alphas in (0.5, 1] with beta = 1 - alpha.

    Returns:
        (alpha_star, v_star), the smallest minimising alpha first.

    Raises:
        EmptyUniverse: if the set has no objects.
    """
    if len(fuzzy_set) == 0:
        raise EmptyUniverse("cannot scan thresholds of an empty universe")
    grades = fuzzy_set.as_array()
    alphas = grid.values()
    alphas = alphas[(alphas > 0.5) & (alphas <= 1.0)]
    if alphas.size == 0:
        raise OutOfRange(f"grid [{grid.lo}, {grid.hi}] has no alpha in (0.5, 1]")
    elevation, n_up, reduction, n_down = _balance_terms(grades, alphas, 1.0 - alphas)
    shadow = grades.size - n_up - n_down
    v = np.abs(elevation + reduction - shadow)
    best = int(np.argmin(v))
    return float(alphas[best]), float(v[best])


def pairwise_v_scan(fuzzy_set: ScalarFuzzySet, grid: GridSpec = GridSpec()) -> Tuple[float, float, float]:
    """
    Unconstrained scan of V over alpha in (0.5, 1] and beta in [0, 0.5).

    Returns:
        (alpha, beta, v) of the first minimum, alphas varying slowest.
    """
    if len(fuzzy_set) == 0:
        raise EmptyUniverse("cannot scan thresholds of an empty universe")
    grades = fuzzy_set.as_array()
    values = grid.values()
    alphas = values[(values > 0.5) & (values <= 1.0)]
    betas = values[(values >= 0.0) & (values < 0.5)]
    if alphas.size == 0 or betas.size == 0:
        raise OutOfRange(f"grid [{grid.lo}, {grid.hi}] must reach both sides of 0.5")
    elevation, n_up, _, _ = _balance_terms(grades, alphas, np.empty(0))
    _, _, reduction, n_down = _balance_terms(grades, np.empty(0), betas)
    # beta < 0.5 < alpha keeps the two regions disjoint
    shadow = grades.size - n_up[:, None] - n_down[None, :]
    v = np.abs(elevation[:, None] + reduction[None, :] - shadow)
    i, j = np.unravel_index(int(np.argmin(v)), v.shape)
    logger.debug("pairwise scan over %d x %d thresholds: V=%r", alphas.size, betas.size, v[i, j])
    return float(alphas[i]), float(betas[j]), float(v[i, j])
