"""Tests for the limit density and the local limit predictions."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sinai_lab.exceptions import RangeError
from sinai_lab.kesten import density_table, llt_prediction, phi_cdf, phi_inf, tail_cutoff
from sinai_lab.utils import LltMode


def test_value_at_zero():
    evaluation = phi_inf(0.0)
    assert evaluation.value == 0.5
    assert evaluation.error_bound == 0.0


def test_value_at_one():
    assert phi_inf(1.0, 1e-12).value == pytest.approx(0.18537, abs=1e-4)


@given(x=st.floats(1e-3, 40.0))
def test_symmetric(x):
    assert phi_inf(x).value == phi_inf(-x).value


@settings(max_examples=50)
@given(x=st.floats(1e-2, 20.0))
def test_error_bound_is_honest(x):
    coarse = phi_inf(x, 1e-6)
    fine = phi_inf(x, 1e-14)
    assert coarse.error_bound <= 1e-6
    assert abs(coarse.value - fine.value) <= coarse.error_bound + 1e-13
    assert coarse.terms_used <= fine.terms_used


def test_small_arguments_need_more_terms():
    assert phi_inf(1e-4).terms_used > phi_inf(1e-1).terms_used > 0


def test_density_decreases_away_from_zero():
    values = [phi_inf(x).value for x in np.linspace(0.0, 10.0, 201)]
    assert all(b <= a + 1e-9 for a, b in zip(values, values[1:]))
    assert all(value >= 0 for value in values)


def test_distribution_function():
    cutoff = tail_cutoff(1e-8)
    assert phi_cdf(0.0, 1e-8) == pytest.approx(0.5, abs=1e-8)
    assert phi_cdf(cutoff, 1e-8) == pytest.approx(1.0, abs=1e-8)
    assert phi_cdf(-cutoff - 1, 1e-8) == 0.0
    points = [phi_cdf(x, 1e-8) for x in (-3.0, -1.0, 0.5, 2.0)]
    assert points == sorted(points)


def test_bad_tolerance():
    with pytest.raises(RangeError):
        phi_inf(1.0, 0.0)
    with pytest.raises(RangeError):
        phi_cdf(1.0, -1.0)


def test_bottom_prediction():
    assert llt_prediction(LltMode.BOTTOM, 0, 1.0, 10.0) == pytest.approx(0.005, rel=1e-12)


def test_walk_prediction():
    n = 1000
    spread = math.log(n) ** 2
    assert llt_prediction("walk", 0, 1.0, n) == pytest.approx(1.0 / spread, rel=1e-12)
    sigma = math.sqrt(2.0)
    expected = 4.0 / spread * phi_inf(2.0 * 5 / spread).value
    assert llt_prediction("walk", 5, sigma, n) == pytest.approx(expected, rel=1e-12)


def test_prediction_ranges():
    with pytest.raises(RangeError):
        llt_prediction("walk", 0, 1.0, 2)
    with pytest.raises(RangeError):
        llt_prediction("bottom", 0, 1.0, 0.0)


def test_density_table():
    rows = density_table(-1.0, 1.0, 0.5)
    assert [row["x"] for row in rows] == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert rows[2]["phi"] == 0.5
    assert rows[0]["phi"] == rows[-1]["phi"]
    assert all(set(row) == {"x", "phi", "error_bound"} for row in rows)
    with pytest.raises(RangeError):
        density_table(1.0, 0.0, 0.5)
