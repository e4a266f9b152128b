import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np

from core.intervals import DEFAULT_EPSILON, Interval, PossibilityDegree, possibility_degree, scale
from decisions.loss_thresholds import Action, IntervalLossProfile, pick_action, shadow_action
from fuzzy.fuzzy_sets import ScalarFuzzySet

logger = logging.getLogger(__name__)

LABELS = ("e", "r", "s")
PAIRS = ("er", "es", "rs")


class Situation(Enum):
    HIGH = "high"  # m >= 0.5, shadow move goes down to 0.5
    LOW = "low"    # m < 0.5, shadow move goes up to 0.5

    @classmethod
    def of(cls, m: float) -> "Situation":
        return cls.HIGH if m >= 0.5 else cls.LOW

    @property
    def domain(self) -> Interval:
        """Grades covered; LOW excludes its upper end 0.5."""
        return Interval(0.5, 1.0) if self is Situation.HIGH else Interval(0.0, 0.5)


class Regime(Enum):
    I = "I"      # p = 0
    II = "II"    # 0 < p < 1
    III = "III"  # p = 1

    @classmethod
    def of(cls, p: float) -> "Regime":
        if p == 0.0:
            return cls.I
        if p == 1.0:
            return cls.III
        return cls.II


@dataclass(frozen=True)
class RiskIntervals:
    r_e: Interval
    r_r: Interval
    r_s: Interval
    situation: Situation

    def as_tuple(self) -> Tuple[Interval, Interval, Interval]:
        return self.r_e, self.r_r, self.r_s


@dataclass(frozen=True)
class PreferenceMatrix:
    """
    Pairwise possibility degrees among the risks, rows and columns ordered (e, r, s).

    p[i][j] is the degree to which risk i exceeds risk j.
    """
    p: Tuple[Tuple[PossibilityDegree, ...], ...]

    def __getitem__(self, index):
        return self.p[index]

    def entry(self, pair: str) -> float:
        """Upper-triangle entry by pair name, e.g. 'er' -> p[0][1]."""
        return self.p[LABELS.index(pair[0])][LABELS.index(pair[1])]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.p, dtype=np.float64)

    def as_lists(self) -> list:
        return [[float(v) for v in row] for row in self.p]


@dataclass(frozen=True)
class PreferenceTotals:
    p_e: float
    p_r: float
    p_s: float


@dataclass(frozen=True)
class RegimeTriple:
    er: Regime
    es: Regime
    rs: Regime

    def as_tuple(self) -> Tuple[Regime, Regime, Regime]:
        return self.er, self.es, self.rs


@dataclass(frozen=True)
class PossibilityDecision:
    """Everything the possibility engine derives for one object."""
    m: float
    risks: RiskIntervals
    matrix: PreferenceMatrix
    totals: PreferenceTotals
    regimes: RegimeTriple
    action: Action

    @property
    def value(self) -> float:
        return self.action.codebook

    @property
    def chosen_risk(self) -> Interval:
        return {Action.ELEVATE: self.risks.r_e, Action.REDUCE: self.risks.r_r}.get(self.action, self.risks.r_s)


@dataclass(frozen=True)
class RegimeCutpoints:
    """
    Grades at which one pair of risk intervals is certainly ordered.

    certain_above: grades where the first risk lies wholly above the second (regime III)
    certain_below: grades where it lies wholly below (regime I)
    Either is None when the situation's domain has no such grade.
    """
    pair: str
    certain_above: Optional[Interval]
    certain_below: Optional[Interval]


# Regime combinations (er, es, rs) -> decisions the row-sum rule can produce.
_OUTCOME_TABLE: Dict[Tuple[Regime, Regime, Regime], FrozenSet[float]] = {}
_I, _II, _III = Regime.I, Regime.II, Regime.III
for _row, _outcomes in (
    ((_I, _I, _I), {1.0}),
    ((_I, _I, _II), {1.0}),
    ((_I, _I, _III), {1.0}),
    ((_I, _II, _I), {1.0}),
    ((_I, _II, _II), {1.0, 0.5}),
    ((_I, _II, _III), {1.0, 0.5}),
    ((_I, _III, _I), {1.0}),
    ((_I, _III, _II), {0.5}),
    ((_I, _III, _III), {0.5}),
    ((_II, _I, _I), {1.0, 0.0}),
    ((_II, _I, _II), {1.0, 0.0, 0.5}),
    ((_II, _I, _III), {1.0}),
    ((_II, _II, _I), {1.0, 0.0}),
    ((_II, _II, _II), {1.0, 0.5, 0.0}),
    ((_II, _II, _III), {1.0, 0.5}),
    ((_II, _III, _I), {0.0}),
    ((_II, _III, _II), {0.5, 0.0}),
    ((_II, _III, _III), {0.5}),
    ((_III, _I, _I), {0.0}),
    ((_III, _I, _II), {0.0}),
    ((_III, _I, _III), {1.0}),
    ((_III, _II, _I), {0.0}),
    ((_III, _II, _II), {0.5, 0.0}),
    ((_III, _II, _III), {0.5}),
    ((_III, _III, _I), {0.0}),
    ((_III, _III, _II), {0.5, 0.0}),
    ((_III, _III, _III), {0.5}),
):
    _OUTCOME_TABLE[_row] = frozenset(_outcomes)

# (III, I, III) needs three certain orderings that only zero-width risks satisfy
# at once; it always ends in a three-way tie, so it is not checked as a table row.
ERRATA_ROWS = frozenset({(_III, _I, _III)})


def risk_intervals(m: float, losses: IntervalLossProfile) -> RiskIntervals:
    """
    Interval risks of the three moves that apply to m.

    Args:
        m: reduced grade in [0, 1]
        losses: interval loss profile

    Returns:
        RiskIntervals with r_e = (1-m)·λe, r_r = m·λr and r_s = (m-0.5)·λsd when
        m >= 0.5, (0.5-m)·λsu otherwise.
    """
    situation = Situation.of(m)
    if situation is Situation.HIGH:
        r_s = scale(losses.lambda_sd, m - 0.5)
    else:
        r_s = scale(losses.lambda_su, 0.5 - m)
    return RiskIntervals(
        r_e=scale(losses.lambda_e, 1.0 - m),
        r_r=scale(losses.lambda_r, m),
        r_s=r_s,
        situation=situation,
    )


def preference_matrix(risks: RiskIntervals, tolerance: float = DEFAULT_EPSILON) -> PreferenceMatrix:
    intervals = risks.as_tuple()
    return PreferenceMatrix(tuple(
        tuple(possibility_degree(x, y, tolerance) for y in intervals) for x in intervals
    ))


def preference_totals(matrix: PreferenceMatrix) -> PreferenceTotals:
    """Row sums of the matrix."""
    p_e, p_r, p_s = (row[0] + row[1] + row[2] for row in matrix.p)
    return PreferenceTotals(float(p_e), float(p_r), float(p_s))


def regimes_of(matrix: PreferenceMatrix) -> RegimeTriple:
    return RegimeTriple(*(Regime.of(matrix.entry(pair)) for pair in PAIRS))


def classify_regimes(risks: RiskIntervals, tolerance: float = DEFAULT_EPSILON) -> RegimeTriple:
    return regimes_of(preference_matrix(risks, tolerance))


def assess(m: float, losses: IntervalLossProfile, tolerance: float = DEFAULT_EPSILON) -> PossibilityDecision:
    """Run the possibility engine on one grade and keep every intermediate."""
    risks = risk_intervals(m, losses)
    matrix = preference_matrix(risks, tolerance)
    totals = preference_totals(matrix)
    # smallest total preference = least likely to be the largest loss
    action = pick_action({
        Action.ELEVATE: totals.p_e,
        Action.REDUCE: totals.p_r,
        shadow_action(m): totals.p_s,
    })
    return PossibilityDecision(m, risks, matrix, totals, regimes_of(matrix), action)


def decide_possibility(m: float, losses: IntervalLossProfile, tolerance: float = DEFAULT_EPSILON) -> float:
    """
    Three-way decision from interval risks.

    Returns:
        1, 0 or 0.5 for the move whose row total is smallest; ties go to
        the committed moves, Elevate before Reduce.
    """
    return assess(m, losses, tolerance).value


def allowed_outcomes(regimes: RegimeTriple) -> FrozenSet[float]:
    """Decisions compatible with a regime combination; identical for both situations."""
    return _OUTCOME_TABLE[regimes.as_tuple()]


def _solve(a: float, b: float, domain: Interval) -> Optional[Interval]:
    # grades in domain with a + b·m >= 0
    if b == 0.0:
        return domain if a >= 0.0 else None
    root = -a / b
    lo, hi = (max(domain.lo, root), domain.hi) if b > 0.0 else (domain.lo, min(domain.hi, root))
    return Interval(lo, hi) if lo <= hi else None


def regime_cutpoints(losses: IntervalLossProfile, situation: Situation) -> Dict[str, RegimeCutpoints]:
    """
    Where each risk pair is certainly ordered, as grade ranges inside the situation.

    Every risk bound is linear in m, so "x certainly above y" (x.lo >= y.hi) and
    "x certainly below y" (y.lo >= x.hi) each hold on one sub-range of the
    situation's grades. Zero-width comparisons at the exact boundary follow
    point order and may differ from the closed ranges returned here.
    """
    # (constant, slope) of each bound as a function of m
    e = ((losses.lambda_e.lo, -losses.lambda_e.lo), (losses.lambda_e.hi, -losses.lambda_e.hi))
    r = ((0.0, losses.lambda_r.lo), (0.0, losses.lambda_r.hi))
    if situation is Situation.HIGH:
        sd = losses.lambda_sd
        s = ((-0.5 * sd.lo, sd.lo), (-0.5 * sd.hi, sd.hi))
    else:
        su = losses.lambda_su
        s = ((0.5 * su.lo, -su.lo), (0.5 * su.hi, -su.hi))
    bounds = {"e": e, "r": r, "s": s}
    domain = situation.domain

    cutpoints = {}
    for pair in PAIRS:
        (x_lo, x_hi), (y_lo, y_hi) = bounds[pair[0]], bounds[pair[1]]
        above = _solve(x_lo[0] - y_hi[0], x_lo[1] - y_hi[1], domain)
        below = _solve(y_lo[0] - x_hi[0], y_lo[1] - x_hi[1], domain)
        cutpoints[pair] = RegimeCutpoints(pair, above, below)
    return cutpoints


def total_risk_interval(
    fuzzy_set: ScalarFuzzySet, losses: IntervalLossProfile, tolerance: float = DEFAULT_EPSILON
) -> Interval:
    """Endpoint-wise sum of the chosen risk interval of every object."""
    lo, hi = 0.0, 0.0
    for m in fuzzy_set.grades:
        chosen = assess(m, losses, tolerance).chosen_risk
        lo += chosen.lo
        hi += chosen.hi
    return Interval(lo, hi)
