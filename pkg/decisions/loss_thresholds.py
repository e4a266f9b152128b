import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple, Union

from core.errors import ConditionViolation, NonPositiveLoss
from core.intervals import Interval, Theta, m_theta
from fuzzy.fuzzy_sets import ScalarFuzzySet
from fuzzy.shadowed_sets import ThresholdPair

logger = logging.getLogger(__name__)


class Action(Enum):
    ELEVATE = "elevate"
    REDUCE = "reduce"
    SHADOW_DOWN = "shadow_down"
    SHADOW_UP = "shadow_up"

    @property
    def codebook(self) -> float:
        return _ACTION_VALUES[self]

    @property
    def region(self) -> str:
        return "shadow" if self in (Action.SHADOW_DOWN, Action.SHADOW_UP) else self.value

    @property
    def priority(self) -> int:
        """Tie-break rank: committed actions first, Elevate before Reduce."""
        return _ACTION_PRIORITY[self]


_ACTION_VALUES = {Action.ELEVATE: 1.0, Action.REDUCE: 0.0, Action.SHADOW_DOWN: 0.5, Action.SHADOW_UP: 0.5}
_ACTION_PRIORITY = {Action.ELEVATE: 0, Action.REDUCE: 1, Action.SHADOW_DOWN: 2, Action.SHADOW_UP: 2}


def shadow_action(m: float) -> Action:
    """Shadow move that applies to m: down to 0.5 from above (m = 0.5 included), up from below."""
    return Action.SHADOW_DOWN if m >= 0.5 else Action.SHADOW_UP


def pick_action(costs: Dict[Action, float]) -> Action:
    """Action with the smallest cost, ties resolved by Action.priority."""
    return min(costs, key=lambda action: (costs[action], action.priority))


@dataclass(frozen=True)
class LossProfile:
    """
    Unit costs of the four moves: to 1, to 0, down to 0.5 and up to 0.5.

    Raises:
        ConditionViolation: c1 (all costs finite and > 0, with cost ratios that do
            not underflow) fails, or c2 (lambda_sd <= lambda_r)
            or c3 (lambda_su <= lambda_e) fails badly enough that reducing above 0.5
            or elevating below 0.5 becomes the cheapest move.
    """
    lambda_e: float
    lambda_r: float
    lambda_sd: float
    lambda_su: float

    def __post_init__(self):
        for name in ("lambda_e", "lambda_r", "lambda_sd", "lambda_su"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ConditionViolation("c1", f"{name} must be a finite positive cost, got {value}")
        le, lr, lsd, lsu = self.normalized()
        if min(le, lr, lsd, lsu) == 0.0:
            raise ConditionViolation("c1", f"cost ratios of {self.as_dict()} underflow to zero")
        gamma = le / (le + lr)
        # c2/c3 in effective form: the plain inequality, or the rule it guards still cannot fire
        if lsd > lr and lsd / (2.0 * (lsd - lr)) < gamma:
            raise ConditionViolation(
                "c2", f"lambda_sd ({self.lambda_sd}) exceeds lambda_r ({self.lambda_r}) so far that reducing a grade "
                      f"above 0.5 becomes optimal"
            )
        if lsu > le and (0.5 * lsu - le) / (lsu - le) >= gamma:
            raise ConditionViolation(
                "c3", f"lambda_su ({self.lambda_su}) exceeds lambda_e ({self.lambda_e}) so far that elevating a grade "
                      f"below 0.5 becomes optimal"
            )

    def normalized(self) -> Tuple[float, float, float, float]:
        """(λe, λr, λsd, λsu) divided by the largest of them, so every sum stays finite."""
        top = max(self.lambda_e, self.lambda_r, self.lambda_sd, self.lambda_su)
        return self.lambda_e / top, self.lambda_r / top, self.lambda_sd / top, self.lambda_su / top

    def scaled(self, c: float) -> "LossProfile":
        return LossProfile(c * self.lambda_e, c * self.lambda_r, c * self.lambda_sd, c * self.lambda_su)

    def as_dict(self) -> dict:
        return {
            "lambda_e": self.lambda_e,
            "lambda_r": self.lambda_r,
            "lambda_sd": self.lambda_sd,
            "lambda_su": self.lambda_su,
        }


@dataclass(frozen=True)
class IntervalLossProfile:
    """Interval-valued unit costs; every lower bound must be positive."""
    lambda_e: Interval
    lambda_r: Interval
    lambda_sd: Interval
    lambda_su: Interval

    def __post_init__(self):
        for name in ("lambda_e", "lambda_r", "lambda_sd", "lambda_su"):
            interval = getattr(self, name)
            if interval.lo <= 0.0:
                raise NonPositiveLoss(f"{name} {interval} must have a strictly positive lower bound")

    @classmethod
    def degenerate(cls, losses: LossProfile) -> "IntervalLossProfile":
        """Zero-width intervals around a scalar profile."""
        return cls(
            Interval(losses.lambda_e, losses.lambda_e),
            Interval(losses.lambda_r, losses.lambda_r),
            Interval(losses.lambda_sd, losses.lambda_sd),
            Interval(losses.lambda_su, losses.lambda_su),
        )

    @property
    def is_degenerate(self) -> bool:
        return all(i.is_degenerate for i in (self.lambda_e, self.lambda_r, self.lambda_sd, self.lambda_su))

    def as_dict(self) -> dict:
        return {
            "lambda_e": self.lambda_e.as_list(),
            "lambda_r": self.lambda_r.as_list(),
            "lambda_sd": self.lambda_sd.as_list(),
            "lambda_su": self.lambda_su.as_list(),
        }


@dataclass(frozen=True)
class DerivedThresholds:
    """Closed-form thresholds of a loss profile; gamma_minus/gamma_plus may be -inf/+inf."""
    alpha: float
    beta: float
    gamma: float
    gamma_minus: float
    gamma_plus: float

    def as_pair(self) -> ThresholdPair:
        return ThresholdPair(self.alpha, self.beta)

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "gamma_minus": self.gamma_minus,
            "gamma_plus": self.gamma_plus,
        }


def risks(m: float, losses: LossProfile) -> Dict[Action, float]:
    """
    Risk (error x unit cost) of each move that applies to m.

    Returns:
        {ELEVATE, REDUCE, SHADOW_DOWN} when m >= 0.5,
        {ELEVATE, REDUCE, SHADOW_UP} when m < 0.5.
    """
    result = {
        Action.ELEVATE: (1.0 - m) * losses.lambda_e,
        Action.REDUCE: m * losses.lambda_r,
    }
    shadow = shadow_action(m)
    if shadow is Action.SHADOW_DOWN:
        result[shadow] = (m - 0.5) * losses.lambda_sd
    else:
        result[shadow] = (0.5 - m) * losses.lambda_su
    assert all(value >= 0.0 for value in result.values()), f"negative risk at m={m}"
    return result


def thresholds_from_losses(losses: LossProfile) -> DerivedThresholds:
    """
    Closed forms of the decision boundaries.

    Args:
        losses: profile satisfying c1-c3 (checked when the profile is built)

    Returns:
        DerivedThresholds with
          alpha       = (2λe + λsd) / (2(λe + λsd))
          beta        = λsu / (2(λr + λsu))
          gamma       = λe / (λe + λr)
          gamma_minus = -λsd / (2(λr - λsd)), -inf when λr = λsd
          gamma_plus  = (λe - 0.5λsu) / (λe - λsu), +inf when λe = λsu

        evaluated on the normalized costs. gamma_minus and gamma_plus grow
        without bound as the costs they subtract approach each other.
    """
    le, lr, lsd, lsu = losses.normalized()
    alpha = (2.0 * le + lsd) / (2.0 * (le + lsd))
    beta = lsu / (2.0 * (lr + lsu))
    gamma = le / (le + lr)
    gamma_minus = -math.inf if lr == lsd else -lsd / (2.0 * (lr - lsd))
    gamma_plus = math.inf if le == lsu else (le - 0.5 * lsu) / (le - lsu)
    # the reduce-above-0.5 and elevate-below-0.5 rules can never fire
    if lsd <= lr:
        assert gamma_minus <= 0.0, f"gamma_minus={gamma_minus} for {losses}"
    if lsu <= le:
        assert gamma_plus >= 1.0, f"gamma_plus={gamma_plus} for {losses}"
    return DerivedThresholds(alpha, beta, gamma, gamma_minus, gamma_plus)


def reduce_losses(losses: IntervalLossProfile, theta: Union[Theta, float]) -> LossProfile:
    """θ-reduce each loss interval; the reduced profile must satisfy c1-c3."""
    theta = Theta(theta)
    reduced = LossProfile(
        m_theta(losses.lambda_e, theta),
        m_theta(losses.lambda_r, theta),
        m_theta(losses.lambda_sd, theta),
        m_theta(losses.lambda_su, theta),
    )
    logger.debug("reduced losses at theta=%s: %s", float(theta), reduced)
    return reduced


def decide(m: float, thresholds: Union[DerivedThresholds, ThresholdPair]) -> float:
    """1 if m >= alpha, 0 if m <= beta, 0.5 otherwise."""
    if m >= thresholds.alpha:
        return 1.0
    if m <= thresholds.beta:
        return 0.0
    return 0.5


def choose_action(m: float, losses: LossProfile) -> Action:
    return pick_action(risks(m, losses))


def decide_by_rules(m: float, losses: LossProfile) -> float:
    """Codebook value of the cheapest applicable move, found by comparing risks directly."""
    return choose_action(m, losses).codebook


def total_loss(fuzzy_set: ScalarFuzzySet, losses: LossProfile) -> float:
    """Σ over objects of the risk of the chosen move."""
    return float(sum(_chosen_risk(m, losses) for m in fuzzy_set.grades))


def _chosen_risk(m: float, losses: LossProfile) -> float:
    costs = risks(m, losses)
    return costs[pick_action(costs)]
