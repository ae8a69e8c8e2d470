"""Tests for the Monte Carlo estimators of bottoms, slopes and ladder constants."""
import numpy as np
import pytest

from sinai_lab.const import STDERR_WIDTH
from sinai_lab.exceptions import RangeError, RejectionBudgetExceeded
from sinai_lab.experiments import (
    b_h_disagreement,
    check_renewal_identity,
    conditioned_law_check,
    conditioned_walk_sample,
    estimate_bh_law,
    estimate_c_constants,
    estimate_slope_moments,
    ladder_entrances,
    monotone_violations,
    race_probabilities,
    sample_bottoms,
)
from sinai_lab.utils import binomial_stderr, combined_stderr, within


def test_bh_law_accounting(two_point):
    result = estimate_bh_law(two_point, 2.0, 300, 1, x_grid=range(-10, 11))
    assert result["valid"] + result["excluded"] == 300
    assert sum(row["count"] for row in result["rows"]) + result["overflow"] == result["valid"]
    assert [row["x"] for row in result["rows"]] == list(range(-10, 11))
    assert all(row["prediction"] > 0 for row in result["rows"])
    assert 0.0 <= result["positive"].estimate <= 1.0
    assert result["D"] >= 0


def test_bottoms_do_not_depend_on_thread_count(logistic):
    inline = sample_bottoms(logistic, 1.5, 300, 42, threads=1, kesten=True)
    pooled = sample_bottoms(logistic, 1.5, 300, 42, threads=2, kesten=True)
    np.testing.assert_array_equal(inline[0], pooled[0])
    np.testing.assert_array_equal(inline[1], pooled[1])
    assert inline[2] == pooled[2]


def test_bottoms_reject_bad_arguments(logistic):
    with pytest.raises(RangeError):
        sample_bottoms(logistic, 0.0, 10, 1)
    with pytest.raises(RangeError):
        sample_bottoms(logistic, 1.0, 0, 1)


def test_monotone_violations():
    rows = [
        {"x": -1, "estimate": 0.10, "stderr": 0.001},
        {"x": 0, "estimate": 0.30, "stderr": 0.001},
        {"x": 1, "estimate": 0.20, "stderr": 0.001},
        {"x": 2, "estimate": 0.25, "stderr": 0.001},
    ]
    assert monotone_violations(rows, width=3.0) == [(1, 2)]
    rows[0]["estimate"] = 0.35
    assert monotone_violations(rows, width=3.0) == [(-1, 0), (1, 2)]


def test_disagreement_rows(two_point):
    rows = b_h_disagreement(two_point, [1.5, 2.5], 100, 3)
    assert [row["h"] for row in rows] == [1.5, 2.5]
    assert all(0.0 <= row["estimate"] <= row["h"] for row in rows)


def test_renewal_rows(two_point):
    result = check_renewal_identity(two_point, 2.0, 300, 5, [2, -2, 0])
    assert [row["x"] for row in result["rows"]] == [-2, 0, 2]
    for row in result["rows"]:
        assert 0.0 <= row["lhs"] <= 1.0
        assert row["rhs"] >= 0.0
        assert row["stderr"] >= row["lhs_stderr"]
    assert result["zero"]["prediction"] == 1.0
    assert result["excluded"] >= 0


def test_renewal_identity_holds(two_point):
    result = check_renewal_identity(two_point, 4.0, 20000, 11, [0, 2, -2, 4, -4, 8, -8])
    assert len(result["rows"]) == 7
    for row in result["rows"]:
        assert row["pass"], row
        assert row["lhs"] > 0
    zero, up = result["zero"], result["up_mean"]
    assert within(zero["estimate"], 1.0, zero["stderr"], STDERR_WIDTH)
    assert within(up["estimate"], up["prediction"], up["stderr"], STDERR_WIDTH)


def test_slope_moments(logistic):
    result = estimate_slope_moments(logistic, 2.0, 200, 6, delta_grid=(0.5, 1.0))
    assert result["up"].estimate > 0 and result["down"].estimate > 0
    low, high = result["excess"]
    assert low["estimate"] <= high["estimate"]
    assert high["scaled"] == pytest.approx(high["estimate"] * 2.0)
    assert np.all(result["up_hits"] >= 1)


def test_strict_race_implies_weak_race(two_point):
    weak, strict = race_probabilities(two_point, 3.0, 500, 2)
    assert weak.shape == strict.shape == (500,)
    assert not np.any(strict & ~weak)
    assert 0 < strict.sum() <= weak.sum() < 500


@pytest.mark.parametrize("conditioning", ["weak", "strict"])
def test_ladder_entrances(logistic, conditioning):
    times, entries = ladder_entrances(logistic, 100, 300, 3, conditioning)
    entered = times >= 0
    assert np.all(times[entered] >= 1) and np.all(times[entered] <= 100)
    if conditioning == "weak":
        assert np.all(entries[entered] < 0)
    else:
        assert np.all(entries[entered] <= 0)
    assert entered.mean() > 0.5


def test_ladder_needs_positive_horizon(logistic):
    with pytest.raises(RangeError):
        ladder_entrances(logistic, 0, 10, 1, "weak")


def test_constants_structure(two_point):
    result = estimate_c_constants(two_point, [2.0], 200, 8, x_grid=(10, 100))
    (row,) = result["heights"]
    assert row["h"] == 2.0
    assert row["c1_star"] <= row["c1"]
    assert set(result["ladder"]) == {"c1", "c1*"}
    assert result["ladder"]["c1"].estimate > 0
    assert len(result["spitzer"]) == 4


def test_bottom_at_zero_matches_race_constants(two_point):
    result = estimate_c_constants(two_point, [6.0], 20000, 12, x_grid=(10, 100))
    (row,) = result["heights"]
    stderr = combined_stderr(row["c6_stderr"], row["product_stderr"])
    assert within(row["c6"], row["product"], stderr, 4.0)
    assert 0.4 <= row["positive"] <= 0.6


@pytest.mark.parametrize("variant", ["weak", "strict"])
def test_conditioned_paths(two_point, variant):
    sample = conditioned_walk_sample(two_point, 3.0, variant, 4)
    path = sample.path
    assert path[0] == 0.0 and path[-1] >= 3.0
    assert np.all(path[:-1] < 3.0)
    if variant == "weak":
        assert path.min() >= 0.0
    else:
        assert np.all(path[1:] > 0.0)
    assert sample.hitting_length == path.size - 1
    assert sample.attempts >= 1


def test_rejection_budget(logistic):
    with pytest.raises(RejectionBudgetExceeded):
        conditioned_walk_sample(logistic, 1e4, "weak", 0, max_attempts=1)


def test_conditioned_law_check_structure(logistic):
    result = conditioned_law_check(logistic, 1.5, 60, 9)
    assert 0.0 <= result["ks_pvalue"] <= 1.0
    assert 0.0 <= result["ks_statistic"] <= 1.0
    assert result["acceptance_scaled"] > 0


def test_conditioned_paths_follow_the_slope_law(logistic):
    result = conditioned_law_check(logistic, 3.0, 2000, 13)
    assert result["ks_pvalue"] > 0.01
    weak, _ = race_probabilities(logistic, 3.0, 2000, 13)
    frequency = float(weak.mean())
    stderr = combined_stderr(result["acceptance_scaled_stderr"], 3.0 * binomial_stderr(frequency, weak.size))
    assert within(result["acceptance_scaled"], 3.0 * frequency, stderr, 4.0)
