import numpy as np

from core.errors import ConditionViolation
from core.intervals import Interval
from decisions.loss_thresholds import IntervalLossProfile, LossProfile, thresholds_from_losses
from fuzzy.fuzzy_sets import ScalarFuzzySet

# effective-form c2/c3 draws keep this distance from the condition boundary
CONDITION_MARGIN = 1e-9


class InstanceGenerator:
    def __init__(
        self,
        seed: int = 42,
        max_lo: float = 10.0,
        max_width: float = 5.0,
        grade_steps: int = 100,
        max_objects: int = 100,
        max_shadow_ratio: float = 4.0,
    ):
        """
        Args:
            seed: RNG seed
            max_lo: loss lower bounds are drawn from (0, max_lo]
            max_width: loss interval widths are drawn from [0, max_width)
            grade_steps: grades are drawn from the (grade_steps + 1)-point grid of [0, 1]
            max_objects: largest generated universe
            max_shadow_ratio: scalar shadow costs are drawn from (0, max_shadow_ratio]
                times the matching committed cost
        """
        self.rng = np.random.default_rng(seed)
        self.max_lo = max_lo
        self.max_width = max_width
        self.grade_steps = grade_steps
        self.max_objects = max_objects
        self.max_shadow_ratio = max_shadow_ratio

    def _positive(self, upper: float) -> float:
        # random() is in [0, 1), so this lands in (0, upper]
        return float(upper * (1.0 - self.rng.random()))

    def grade(self) -> float:
        return int(self.rng.integers(0, self.grade_steps + 1)) / self.grade_steps

    def loss_interval(self) -> Interval:
        lo = self._positive(self.max_lo)
        return Interval(lo, lo + float(self.rng.uniform(0.0, self.max_width)))

    def interval_profile(self) -> IntervalLossProfile:
        """Four independent loss intervals; no ordering between them is imposed."""
        return IntervalLossProfile(
            self.loss_interval(), self.loss_interval(), self.loss_interval(), self.loss_interval()
        )

    def loss_profile(self) -> LossProfile:
        """
        Scalar profile satisfying c1-c3.

        Shadow costs may exceed the committed ones. Draws that c2/c3 reject, or
        that sit within CONDITION_MARGIN of their boundary, are redrawn.
        """
        while True:
            lambda_e = self._positive(self.max_lo)
            lambda_r = self._positive(self.max_lo)
            lambda_sd = lambda_r * self._positive(self.max_shadow_ratio)
            lambda_su = lambda_e * self._positive(self.max_shadow_ratio)
            try:
                losses = LossProfile(lambda_e, lambda_r, lambda_sd, lambda_su)
            except ConditionViolation:
                continue
            if clear_of_boundaries(losses):
                return losses

    def fuzzy_set(self, size: int = None) -> ScalarFuzzySet:
        """Universe of 1..max_objects objects; half the draws snap grades to the grade grid."""
        if size is None:
            size = int(self.rng.integers(1, self.max_objects + 1))
        grades = self.rng.random(size)
        if self.rng.random() < 0.5:
            grades = np.round(grades * self.grade_steps) / self.grade_steps
        return ScalarFuzzySet.from_grades(grades)


def clear_of_boundaries(losses: LossProfile) -> bool:
    """False when an effective-form c2/c3 profile lies within CONDITION_MARGIN of rejection."""
    t = thresholds_from_losses(losses)
    if losses.lambda_sd > losses.lambda_r and t.gamma_minus - t.gamma < CONDITION_MARGIN:
        return False
    if losses.lambda_su > losses.lambda_e and t.gamma - t.gamma_plus < CONDITION_MARGIN:
        return False
    return True
