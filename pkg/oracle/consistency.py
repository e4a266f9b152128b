import json
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List

import numpy as np

from core.intervals import DEFAULT_EPSILON, Interval
from decisions.loss_thresholds import (
    IntervalLossProfile,
    LossProfile,
    decide,
    decide_by_rules,
    thresholds_from_losses,
)
from decisions.possibility import ERRATA_ROWS, allowed_outcomes, assess
from fuzzy.shadowed_sets import (
    ThresholdPair,
    error_optimal_thresholds,
    objective_v,
    optimize_thresholds_balanced,
    region_cardinalities,
    region_errors,
)
from oracle.brute_force import GridSpec, brute_force_decide_grid, exhaustive_v_scan, threshold_scan
from oracle.instances import InstanceGenerator

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-12
BOUNDARY_GAP = 1e-9
SCALE_FACTORS = (0.1, 10.0)

EXAMPLE_HIGH = (0.7, IntervalLossProfile(Interval(1.0, 2.0), Interval(5.0, 6.0), Interval(3.0, 4.0), Interval(3.0, 4.0)), 1.0)
EXAMPLE_LOW = (0.4, IntervalLossProfile(Interval(5.0, 6.0), Interval(1.0, 2.0), Interval(3.0, 4.0), Interval(3.0, 4.0)), 0.5)


@dataclass
class SuiteReport:
    """Counts of checks run per kind, and every violation with the data to reproduce it."""
    name: str
    checks: Dict[str, int] = field(default_factory=dict)
    violations: List[dict] = field(default_factory=list)
    errata: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, kind: str, n: int = 1) -> None:
        self.checks[kind] = self.checks.get(kind, 0) + n

    def violate(self, kind: str, **data) -> None:
        record = {"check": kind, **data}
        logger.warning("%s violation: %s", self.name, record)
        self.violations.append(record)

    @classmethod
    def merge(cls, name: str, reports: Iterable["SuiteReport"]) -> "SuiteReport":
        """Combine shards; the result does not depend on their order."""
        merged = cls(name)
        for report in reports:
            for kind, n in report.checks.items():
                merged.count(kind, n)
            merged.violations.extend(report.violations)
            merged.errata += report.errata
        merged.violations.sort(key=lambda v: json.dumps(v, sort_keys=True, default=str))
        merged.checks = dict(sorted(merged.checks.items()))
        return merged

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "checks": dict(sorted(self.checks.items())),
            "errata": self.errata,
            "violations": self.violations,
        }


def _check_possibility_case(report: SuiteReport, m: float, losses: IntervalLossProfile, tolerance: float) -> float:
    result = assess(m, losses, tolerance)
    p = result.matrix.as_array()
    repro = {"m": m, "losses": losses.as_dict(), "matrix": result.matrix.as_lists()}

    report.count("diagonal")
    if not np.all(np.diag(p) == 0.5):
        report.violate("diagonal", **repro)
    report.count("complementarity")
    if np.max(np.abs(p + p.T - 1.0)) > PROBABILITY_TOLERANCE:
        report.violate("complementarity", **repro)
    report.count("totals")
    totals = result.totals
    if abs(totals.p_e + totals.p_r + totals.p_s - 4.5) > PROBABILITY_TOLERANCE:
        report.violate("totals", **repro)

    row = result.regimes.as_tuple()
    if row in ERRATA_ROWS:
        report.errata += 1
        logger.debug("regime row %s skipped as table erratum (m=%r)", [r.value for r in row], m)
    else:
        report.count("outcome_table")
        if result.value not in allowed_outcomes(result.regimes):
            report.violate("outcome_table", decision=result.value, regimes=[r.value for r in row], **repro)
    return result.value


def possibility_consistency_suite(
    seed: int = 42,
    n_cases: int = 10000,
    tolerance: float = DEFAULT_EPSILON,
    grid_points: int = 1001,
) -> SuiteReport:
    """
    Random (grade, interval losses) cases through the possibility engine.

    Checks the matrix invariants and the regime outcome table on n_cases
    cases plus the two worked examples, then runs zero-width loss profiles
    over a grade grid against the scalar risk rules and the brute force.
    """
    report = SuiteReport("possibility")
    gen = InstanceGenerator(seed=seed)

    for m, losses, expected in (EXAMPLE_HIGH, EXAMPLE_LOW):
        decision = _check_possibility_case(report, m, losses, tolerance)
        report.count("worked_example")
        if decision != expected:
            report.violate("worked_example", m=m, losses=losses.as_dict(), decision=decision, expected=expected)

    for _ in range(n_cases):
        _check_possibility_case(report, gen.grade(), gen.interval_profile(), tolerance)

    grades = GridSpec(grid_points).values()
    for _ in range(max(1, n_cases // 1000)):
        scalar = gen.loss_profile()
        degenerate = IntervalLossProfile.degenerate(scalar)
        reference = brute_force_decide_grid(grades, scalar)
        for m, expected in zip(grades.tolist(), reference.tolist()):
            decision = assess(m, degenerate, tolerance).value
            report.count("degenerate_bridge")
            if decision != decide_by_rules(m, scalar) or decision != expected:
                report.violate("degenerate_bridge", m=m, losses=scalar.as_dict(), decision=decision)

    logger.info("possibility suite: %s checks, %d violations", report.checks, len(report.violations))
    return report


def thresholds_close(a: float, b: float, tolerance: float = PROBABILITY_TOLERANCE) -> bool:
    """
    Equality of two threshold values up to rounding.

    alpha, beta and gamma are bounded and compare absolutely. gamma_minus and
    gamma_plus are not: a relative cost perturbation d moves them by about
    4·d·γ², so the allowance grows with γ² once |γ| > 1.
    """
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tolerance * max(1.0, a * a)


def _check_ranges(report: SuiteReport, losses: LossProfile) -> None:
    t = thresholds_from_losses(losses)
    report.count("ranges")
    # the reduce-above-0.5 rule never fires (gamma_minus <= 0 or >= gamma),
    # nor the elevate-below-0.5 rule (gamma_plus >= 1 or < gamma)
    if not (
        0.5 < t.alpha < 1.0
        and 0.0 < t.beta < 0.5
        and (t.gamma_minus <= 0.0 or t.gamma_minus >= t.gamma)
        and (t.gamma_plus >= 1.0 or t.gamma_plus < t.gamma)
    ):
        report.violate("ranges", losses=losses.as_dict(), thresholds=t.as_dict())
    for c in SCALE_FACTORS:
        scaled = thresholds_from_losses(losses.scaled(c)).as_dict()
        report.count("scale_invariance")
        if not all(thresholds_close(v, scaled[k]) for k, v in t.as_dict().items()):
            report.violate("scale_invariance", losses=losses.as_dict(), factor=c)


def threshold_oracle_suite(seed: int = 42, profiles: int = 100, grid_points: int = 1001) -> SuiteReport:
    """
    Closed-form thresholds against exhaustive risk comparison.

    For each random profile every grid grade away from alpha and beta must get
    the same decision both ways, and the scanned boundaries must sit within one
    grid step of the closed forms. Range and scale checks run on a hundred
    times as many profiles, plus the equality cases of c2 and c3 and a profile
    whose shadow-up cost exceeds its elevate cost.
    """
    report = SuiteReport("thresholds")
    gen = InstanceGenerator(seed=seed)
    grid = GridSpec(grid_points)
    grades = grid.values()

    for _ in range(profiles):
        losses = gen.loss_profile()
        t = thresholds_from_losses(losses)
        reference = brute_force_decide_grid(grades, losses)
        for m, expected in zip(grades.tolist(), reference.tolist()):
            if abs(m - t.alpha) <= BOUNDARY_GAP or abs(m - t.beta) <= BOUNDARY_GAP:
                continue
            report.count("closed_form_vs_brute_force")
            if decide(m, t) != expected:
                report.violate("closed_form_vs_brute_force", m=m, losses=losses.as_dict(), thresholds=t.as_dict())
        alpha_hat, beta_hat = threshold_scan(losses, grid)
        report.count("threshold_scan")
        step = grid.step + BOUNDARY_GAP
        if alpha_hat is None or beta_hat is None or not (
            t.alpha - BOUNDARY_GAP <= alpha_hat <= t.alpha + step and t.beta - step <= beta_hat <= t.beta + BOUNDARY_GAP
        ):
            report.violate("threshold_scan", losses=losses.as_dict(), alpha_hat=alpha_hat, beta_hat=beta_hat,
                           thresholds=t.as_dict())

    for losses in [LossProfile(1.0, 1.0, 1.0, 1.0), LossProfile(2.0, 3.0, 3.0, 2.0), LossProfile(1.5, 5.5, 3.5, 3.5)]:
        _check_ranges(report, losses)
    for _ in range(profiles * 100):
        _check_ranges(report, gen.loss_profile())

    logger.info("threshold suite: %s checks, %d violations", report.checks, len(report.violations))
    return report


def optimizer_oracle_suite(seed: int = 42, datasets: int = 50, grid_points: int = 10001) -> SuiteReport:
    """
    Breakpoint optimiser against an exhaustive alpha scan on random universes,
    plus the shadow-balance identity at the optimum and at the error-optimal pair.
    """
    report = SuiteReport("optimizer")
    gen = InstanceGenerator(seed=seed)
    grid = GridSpec(grid_points, 0.5, 1.0)

    for _ in range(datasets):
        fuzzy_set = gen.fuzzy_set()
        alpha, v = optimize_thresholds_balanced(fuzzy_set)
        alpha_star, v_star = exhaustive_v_scan(fuzzy_set, grid)
        report.count("optimizer_vs_scan")
        if v > v_star + PROBABILITY_TOLERANCE:
            report.violate("optimizer_vs_scan", grades=list(fuzzy_set.grades), alpha=alpha, v=v,
                           alpha_star=alpha_star, v_star=v_star)
        for thresholds in (ThresholdPair(alpha, 1.0 - alpha), error_optimal_thresholds()):
            errors = region_errors(fuzzy_set, thresholds)
            report.count("shadow_balance")
            if errors.shadow != region_cardinalities(fuzzy_set, thresholds)["shadow"]:
                report.violate("shadow_balance", grades=list(fuzzy_set.grades), alpha=thresholds.alpha,
                               beta=thresholds.beta, shadow_error=errors.shadow)
            report.count("objective_from_errors")
            if abs(errors.elevated + errors.reduced - errors.shadow) != objective_v(fuzzy_set, thresholds):
                report.violate("objective_from_errors", grades=list(fuzzy_set.grades), alpha=thresholds.alpha,
                               beta=thresholds.beta)

    logger.info("optimizer suite: %s checks, %d violations", report.checks, len(report.violations))
    return report
