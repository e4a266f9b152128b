# tests/test_consistency.py
import pytest

from oracle.consistency import (
    SuiteReport,
    optimizer_oracle_suite,
    possibility_consistency_suite,
    threshold_oracle_suite,
    thresholds_close,
)


def test_possibility_suite_small():
    report = possibility_consistency_suite(seed=1, n_cases=300, grid_points=101)
    assert report.ok, report.violations
    assert report.checks["worked_example"] == 2
    assert report.checks["diagonal"] == 302
    assert report.checks["degenerate_bridge"] == 101
    assert report.checks["outcome_table"] + report.errata == 302


def test_threshold_suite_small():
    report = threshold_oracle_suite(seed=2, profiles=5, grid_points=201)
    assert report.ok, report.violations
    assert report.checks["threshold_scan"] == 5
    assert report.checks["ranges"] == 3 + 500
    assert report.checks["scale_invariance"] == 2 * 503


def test_optimizer_suite_small():
    report = optimizer_oracle_suite(seed=3, datasets=5, grid_points=2001)
    assert report.ok, report.violations
    assert report.checks["optimizer_vs_scan"] == 5
    assert report.checks["shadow_balance"] == 10


def test_suites_are_reproducible():
    first = possibility_consistency_suite(seed=9, n_cases=50, grid_points=11).as_dict()
    second = possibility_consistency_suite(seed=9, n_cases=50, grid_points=11).as_dict()
    assert first == second


def test_violation_is_recorded_with_data():
    report = SuiteReport("demo")
    report.count("closed_form_vs_brute_force")
    report.violate("closed_form_vs_brute_force", m=0.5)
    assert not report.ok
    assert report.violations == [{"check": "closed_form_vs_brute_force", "m": 0.5}]


def test_merge_is_order_independent():
    # arrange
    a, b = SuiteReport("a"), SuiteReport("b")
    a.count("x", 3)
    a.violate("x", m=0.1)
    b.count("y")
    b.count("x")
    b.violate("y", m=0.9)
    b.errata = 2

    # act
    forward = SuiteReport.merge("all", [a, b]).as_dict()
    backward = SuiteReport.merge("all", [b, a]).as_dict()

    # assert
    assert forward == backward
    assert forward["checks"] == {"x": 4, "y": 1}
    assert forward["errata"] == 2
    assert len(forward["violations"]) == 2


@pytest.mark.slow
def test_possibility_suite_full_scale():
    report = possibility_consistency_suite(seed=42, n_cases=10000)
    assert report.ok, report.violations[:5]


@pytest.mark.slow
def test_threshold_suite_full_scale():
    report = threshold_oracle_suite(seed=42, profiles=100)
    assert report.ok, report.violations[:5]


@pytest.mark.slow
def test_optimizer_suite_full_scale():
    report = optimizer_oracle_suite(seed=42, datasets=50)
    assert report.ok, report.violations[:5]


@pytest.mark.parametrize("a, b, expected", [
    (0.65, 0.65 + 5e-13, True),
    (0.65, 0.65 + 5e-12, False),
    (-127.5, -127.49999999999856, True),
    (-127.5, -127.4999, False),
    (-float("inf"), -float("inf"), True),
    (-float("inf"), -1e300, False),
])
def test_thresholds_close(a, b, expected):
    assert thresholds_close(a, b) is expected
