# tests/test_shadowed_sets.py
import numpy as np
import pytest
from hypothesis import given, strategies as st

from core.errors import EmptyUniverse, OutOfRange
from fuzzy.fuzzy_sets import ScalarFuzzySet
from fuzzy.shadowed_sets import (
    ShadowValue,
    ThresholdPair,
    approx_three_way,
    balanced_candidates,
    error_optimal_thresholds,
    objective_v,
    objective_v_balanced,
    optimize_thresholds_balanced,
    per_object_error,
    region_cardinalities,
    region_errors,
    shadow_assign,
    shadow_partition,
    total_error,
)

REDUCED_EXAMPLE = ScalarFuzzySet.from_mapping({"x": 0.15, "y": 0.7, "z": 0.4, "w": 0.45})
T = ThresholdPair(0.8, 0.2)

unit = st.floats(min_value=0.0, max_value=1.0)
fuzzy_sets = st.lists(unit, min_size=1, max_size=30).map(ScalarFuzzySet.from_grades)
pairs = st.builds(
    ThresholdPair,
    st.floats(min_value=0.5, max_value=1.0, exclude_min=True),
    st.floats(min_value=0.0, max_value=0.5, exclude_max=True),
)


@pytest.mark.parametrize("alpha, beta", [(0.5, 0.2), (0.8, 0.5), (1.1, 0.2), (0.8, -0.1)])
def test_threshold_pair_invariant(alpha, beta):
    with pytest.raises(OutOfRange):
        ThresholdPair(alpha, beta)


@pytest.mark.parametrize("m, expected", [
    (0.9, ShadowValue.ONE),
    (0.8, ShadowValue.ONE),
    (0.5, ShadowValue.UNIT),
    (0.2, ShadowValue.ZERO),
    (0.0, ShadowValue.ZERO),
])
def test_shadow_assign_weak_inequalities(m, expected):
    assert shadow_assign(m, T) is expected


def test_shadow_value_names():
    assert [v.region for v in ShadowValue] == ["reduce", "shadow", "elevate"]
    assert [v.codebook for v in ShadowValue] == [0.0, 0.5, 1.0]


def test_region_errors_single_object():
    errors = region_errors(ScalarFuzzySet.from_mapping({"x": 0.7}), T)
    assert (errors.elevated, errors.reduced, errors.shadow) == (0.0, 0.0, 1.0)
    assert errors.shadow_half == pytest.approx(0.2, abs=1e-12)


def test_region_errors_worked_example():
    errors = region_errors(REDUCED_EXAMPLE, T)
    assert errors.elevated == 0.0
    assert errors.reduced == pytest.approx(0.15, abs=1e-12)
    assert errors.shadow == 3.0
    assert errors.shadow_half == pytest.approx(0.35, abs=1e-12)


def test_region_errors_without_shadow():
    errors = region_errors(ScalarFuzzySet.from_grades([0.85, 0.9, 1.0]), T)
    assert (errors.reduced, errors.shadow, errors.shadow_half) == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("fuzzy_set, expected", [
    (REDUCED_EXAMPLE, 2.85),
    (ScalarFuzzySet((), ()), 0.0),
    (ScalarFuzzySet.from_mapping({"x": 1.0}), 0.0),
])
def test_objective_v(fuzzy_set, expected):
    assert objective_v(fuzzy_set, T) == pytest.approx(expected, abs=1e-12)


def test_objective_v_balanced():
    assert objective_v_balanced(REDUCED_EXAMPLE, 0.8) == objective_v(REDUCED_EXAMPLE, ThresholdPair(0.8, 1.0 - 0.8))
    assert objective_v_balanced(ScalarFuzzySet.from_mapping({"x": 0.6}), 0.55) == pytest.approx(0.4, abs=1e-12)
    with pytest.raises(OutOfRange):
        objective_v_balanced(REDUCED_EXAMPLE, 0.5)


@given(fuzzy_sets, pairs)
def test_shadow_error_equals_shadow_cardinality(fuzzy_set, thresholds):
    errors = region_errors(fuzzy_set, thresholds)
    assert errors.shadow == region_cardinalities(fuzzy_set, thresholds)["shadow"]
    assert abs(errors.elevated + errors.reduced - errors.shadow) == objective_v(fuzzy_set, thresholds)


def test_optimizer_on_crisp_set_returns_smallest_candidate():
    alpha, v = optimize_thresholds_balanced(ScalarFuzzySet.from_mapping({"x": 1.0, "y": 0.0}))
    assert v == 0.0
    assert alpha == np.nextafter(0.5, 1.0)


def test_optimizer_single_shadow_object():
    alpha, v = optimize_thresholds_balanced(ScalarFuzzySet.from_mapping({"x": 0.5}))
    assert v == 1.0
    assert alpha == np.nextafter(0.5, 1.0)


def test_optimizer_worked_example_beats_every_candidate():
    # arrange
    alpha, v = optimize_thresholds_balanced(REDUCED_EXAMPLE)

    # act
    every = [objective_v_balanced(REDUCED_EXAMPLE, a) for a in np.linspace(0.5, 1.0, 10001)[1:]]

    # assert
    assert 0.5 < alpha <= 1.0
    assert v == objective_v_balanced(REDUCED_EXAMPLE, alpha)
    assert v <= min(every) + 1e-12


def test_optimizer_rejects_empty_universe():
    with pytest.raises(EmptyUniverse):
        optimize_thresholds_balanced(ScalarFuzzySet((), ()))


@given(fuzzy_sets)
def test_candidates_lie_in_open_closed_half(fuzzy_set):
    candidates = balanced_candidates(fuzzy_set)
    assert np.all(candidates > 0.5) and np.all(candidates <= 1.0)
    assert np.all(np.diff(candidates) > 0)


@pytest.mark.parametrize("m, expected", [(0.7, 0.5), (0.0, 0.0), (1.0, 1.0)])
def test_approx_three_way(m, expected):
    assert approx_three_way(m, ThresholdPair(11 / 14, 1 / 8)) == expected


@given(unit, pairs)
def test_approx_agrees_with_shadow_on_committed_regions(m, thresholds):
    value = shadow_assign(m, thresholds)
    if value is not ShadowValue.UNIT:
        assert approx_three_way(m, thresholds) == value.codebook


@pytest.mark.parametrize("m, expected", [(0.7, 0.2), (0.15, 0.15), (0.5, 0.0), (0.2, 0.2), (0.9, 0.1)])
def test_per_object_error(m, expected):
    assert per_object_error(m, T) == pytest.approx(expected, abs=1e-12)


@given(unit, pairs)
def test_per_object_error_is_distance_to_codebook(m, thresholds):
    expected = abs(m - approx_three_way(m, thresholds))
    assert per_object_error(m, thresholds) == pytest.approx(expected, abs=1e-15)


def test_total_error():
    assert total_error(REDUCED_EXAMPLE, T) == pytest.approx(0.5, abs=1e-12)
    assert total_error(ScalarFuzzySet((), ()), T) == 0.0
    assert total_error(ScalarFuzzySet.from_grades([0.0, 0.5, 1.0]), T) == 0.0


@given(unit, pairs, st.floats(min_value=0.0, max_value=1.0))
def test_total_error_monotone_toward_codebook(m, thresholds, step):
    # moving a grade toward its codebook value without leaving the region never adds error
    target = approx_three_way(m, thresholds)
    moved = m + step * (target - m)
    if shadow_assign(moved, thresholds) is shadow_assign(m, thresholds):
        before = total_error(ScalarFuzzySet.from_grades([m]), thresholds)
        after = total_error(ScalarFuzzySet.from_grades([moved]), thresholds)
        assert after <= before + 1e-15


def test_error_optimal_thresholds():
    t = error_optimal_thresholds()
    assert (t.alpha, t.beta) == (0.75, 0.25)


def test_shadow_partition_keeps_universe_order():
    partition = shadow_partition(REDUCED_EXAMPLE, ThresholdPair(0.65, 0.42))
    assert partition == {"elevate": ["y"], "reduce": ["x", "z"], "shadow": ["w"]}
    assert region_cardinalities(REDUCED_EXAMPLE, ThresholdPair(0.65, 0.42)) == {"elevate": 1, "reduce": 2, "shadow": 1}
