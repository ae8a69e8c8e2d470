"""Tests for h-extrema, slopes and localization points."""
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import split_bottom_values
from sinai_lab.decomp import (
    bruteforce_left_extrema,
    central_valley,
    extract_canonical_slopes,
    glue,
    kesten_b_h_K,
    ladder_epochs,
    localization_b_h,
    reconstruct,
    right_extrema,
    rise_time,
    scan_left_extrema,
    slope,
    stopping_times,
    zeta,
)
from sinai_lab.envgen import make_env_law, reflect_window, sample_window, window_from_values
from sinai_lab.exceptions import ExtensionBudgetExceeded, RangeError
from sinai_lab.models import SlopeView
from sinai_lab.utils import Direction, ExtremumKind, SlopeVariant

seeds = st.integers(min_value=0, max_value=2**63 - 1)
lattice_paths = st.lists(st.sampled_from([-1, 1]), min_size=2, max_size=120)
paths = st.lists(st.floats(-3, 3, allow_nan=False), min_size=1, max_size=40)


def _summary(records):
    return [(record.index, record.position, record.kind, record.value) for record in records]


def _lattice_window(steps, origin):
    values = np.concatenate([[0.0], np.cumsum(steps)]).astype(float)
    origin = min(origin, len(steps))
    return window_from_values(values - values[origin], -origin)


def test_v_shaped_valley(v_window):
    decomposition = scan_left_extrema(v_window, 3.0)
    assert decomposition.position(0) == 0
    assert decomposition.extremum(0).kind == ExtremumKind.MIN
    assert localization_b_h(decomposition) == 0
    assert kesten_b_h_K(v_window, 3.0) == 0


def test_v_shaped_valley_right_minimum(v_window):
    decomposition = right_extrema(v_window, 3.0)
    assert decomposition.position(1) == 0
    assert decomposition.extremum(1).kind == ExtremumKind.MIN


@pytest.mark.parametrize("h", [2, 3, 5])
def test_localizations_differ_on_split_valley(h):
    values, lo = split_bottom_values(h)
    window = window_from_values(values, lo)
    decomposition = scan_left_extrema(window, float(h), 0, 1, flank=0)
    assert decomposition.position(0) == -1
    assert decomposition.position(1) == h + 1
    assert localization_b_h(decomposition) == -1
    assert kesten_b_h_K(window, float(h)) == 0


def test_bruteforce_edge_cases():
    increasing = window_from_values(np.arange(30.0), 0)
    flat = window_from_values(np.zeros(30), -15)
    assert bruteforce_left_extrema(increasing, 2.0) == []
    assert bruteforce_left_extrema(flat, 0.5) == []
    assert scan_left_extrema(flat, 0.5).extrema == []


@settings(max_examples=200, deadline=None)
@given(steps=lattice_paths, origin=st.integers(0, 120), h=st.integers(1, 5))
def test_scan_matches_bruteforce_on_lattice_paths(steps, origin, h):
    window = _lattice_window(steps, origin)
    scanned = scan_left_extrema(window, float(h))
    assert _summary(scanned.extrema) == _summary(bruteforce_left_extrema(window, float(h)))


@settings(max_examples=50, deadline=None)
@given(seed=seeds, h=st.floats(0.5, 4.0), kind=st.sampled_from(["two-point", "logistic-uniform"]))
def test_scan_matches_bruteforce_on_sampled_windows(seed, h, kind):
    law = make_env_law(kind, 0.3 if kind == "two-point" else 1.0)
    window = sample_window(law, seed, -100, 100)
    scanned = scan_left_extrema(window, h)
    assert _summary(scanned.extrema) == _summary(bruteforce_left_extrema(window, h))


@settings(max_examples=50, deadline=None)
@given(seed=seeds, h=st.floats(0.5, 4.0))
def test_kinds_alternate_and_slopes_are_high(seed, h):
    law = make_env_law("logistic-uniform", 1.0)
    decomposition = scan_left_extrema(sample_window(law, seed, -50, 50), h, -3, 3)
    kinds = [record.kind for record in decomposition.extrema]
    assert all(a != b for a, b in zip(kinds, kinds[1:]))
    positions = [record.position for record in decomposition.extrema]
    assert positions == sorted(set(positions))
    assert decomposition.position(0) <= 0 < decomposition.position(1)
    for i in range(decomposition.k_min, decomposition.k_max):
        piece = slope(decomposition, i)
        assert piece.height >= h
        assert piece.excess >= 0


@settings(max_examples=50, deadline=None)
@given(seed=seeds, h=st.floats(0.5, 4.0))
def test_right_extrema_duality(seed, h):
    law = make_env_law("two-point", 0.3)
    window = sample_window(law, seed, -80, 80)
    right = right_extrema(window, h)
    left_of_mirror = {record.index: record for record in scan_left_extrema(reflect_window(window), h).extrema}
    for record in right.extrema:
        assert record.position + left_of_mirror[1 - record.index].position == 0
    kinds = [record.kind for record in right.extrema]
    assert all(a != b for a, b in zip(kinds, kinds[1:]))
    if right.extrema:
        assert all(record.position < 0 for record in right.extrema if record.index <= 0)
        assert all(record.position >= 0 for record in right.extrema if record.index >= 1)


@settings(max_examples=50, deadline=None)
@given(seed=seeds, h=st.floats(0.5, 5.0))
def test_b_h_is_a_left_minimum(seed, h):
    law = make_env_law("two-point", 0.3)
    decomposition = scan_left_extrema(sample_window(law, seed, -20, 20), h, 0, 1)
    bottom = localization_b_h(decomposition)
    record = next(record for record in decomposition.extrema if record.position == bottom)
    assert record.kind == ExtremumKind.MIN
    M_minus, M_plus = central_valley(decomposition)
    assert M_minus < bottom < M_plus


def test_window_grows_until_certified(logistic):
    window = sample_window(logistic, 5, -5, 5)
    decomposition = scan_left_extrema(window, 3.0, -2, 2)
    assert decomposition.k_min == -3
    assert decomposition.k_max == 3
    assert decomposition.window.lo < -5 or decomposition.window.hi > 5


def test_fixed_window_budget(v_window):
    with pytest.raises(ExtensionBudgetExceeded):
        scan_left_extrema(v_window, 3.0, -1, 1)


def test_scan_rejects_bad_arguments(v_window):
    with pytest.raises(RangeError):
        scan_left_extrema(v_window, 0.0)
    with pytest.raises(RangeError):
        scan_left_extrema(v_window, 1.0, 2, 1)


def test_decomposition_json_form(v_window):
    document = scan_left_extrema(v_window, 3.0).to_dict()
    assert document == {
        "h": 3.0,
        "side": "left",
        "extrema": [{"k": 0, "position": 0, "kind": "min", "value": 0.0}],
    }


@settings(max_examples=50, deadline=None)
@given(seed=seeds, h=st.floats(1.0, 4.0), variant=st.sampled_from(list(SlopeVariant)))
def test_canonical_slopes(seed, h, variant):
    law = make_env_law("logistic-uniform", 1.0)
    window = sample_window(law, seed, 0, 4000)
    extrema, _ = stopping_times(window.V, h, count=3, last=variant == SlopeVariant.STARRED)
    assume(len(extrema) == 3)
    upward, downward = extract_canonical_slopes(window, h, variant)
    assert upward.direction == Direction.UPWARD
    assert downward.direction == Direction.DOWNWARD
    assert upward.height >= h and downward.height >= h
    assert upward.length == extrema[1] - extrema[0]
    assert downward.length == extrema[2] - extrema[1]
    assert upward.values[0] == 0.0 and upward.values.min() == 0.0
    assert upward.values[-1] == upward.values.max()
    assert downward.values[0] == downward.values.max() == 0.0
    assert downward.values[-1] == downward.values.min()


@settings(max_examples=50, deadline=None)
@given(seed=seeds, h=st.floats(0.5, 4.0))
def test_ladder_epochs_locate_starred_minimum(seed, h):
    law = make_env_law("two-point", 0.3)
    window = sample_window(law, seed, 0, 4000)
    extrema, _ = stopping_times(window.V, h, count=1, last=True)
    assume(extrema)
    ladder = ladder_epochs(window, h)
    assert ladder.epochs[0] == 0
    values = [window.v(epoch) for epoch in ladder.epochs]
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert all(height < h for height in ladder.heights)
    assert ladder.L == len(ladder.heights)
    assert ladder.m1_star == ladder.epochs[ladder.L] == extrema[0]


def test_zeta_example():
    np.testing.assert_array_equal(zeta([0.0, 1.0, 3.0]), [0.0, -2.0, -3.0])


def test_zeta_flips_direction():
    upward = SlopeView(values=np.array([0.0, 1.0, 3.0]), direction=Direction.UPWARD)
    downward = zeta(upward)
    assert downward.direction == Direction.DOWNWARD
    assert downward.values[-1] == downward.values.min()


@given(increments=paths)
def test_zeta_is_an_involution(increments):
    path = np.concatenate([[0.0], np.cumsum(increments)])
    np.testing.assert_allclose(zeta(zeta(path)), path, atol=1e-9)


def test_glue_example():
    np.testing.assert_array_equal(glue([0.0, 1.0], [5.0, 7.0]), [0.0, 1.0, 3.0])


@given(f=paths, g=paths, k=paths)
def test_glue_length_and_associativity(f, g, k):
    f, g, k = np.array(f), np.array(g), np.array(k)
    assert glue(f, g).size - 1 == (f.size - 1) + (g.size - 1)
    np.testing.assert_allclose(glue(glue(f, g), k), glue(f, glue(g, k)), atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=seeds, h=st.floats(0.5, 4.0), kind=st.sampled_from(["two-point", "logistic-uniform"]))
def test_reconstruction_from_slopes(seed, h, kind):
    law = make_env_law(kind, 0.3 if kind == "two-point" else 1.0)
    decomposition = scan_left_extrema(sample_window(law, seed, -50, 50), h, -2, 2)
    start, stop = decomposition.position(decomposition.k_min), decomposition.position(decomposition.k_max)
    np.testing.assert_allclose(reconstruct(decomposition), decomposition.window.segment(start, stop), atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(increments=st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=400), h=st.floats(0.5, 6.0))
def test_rise_time_is_first_excursion_above_running_minimum(increments, h):
    values = np.concatenate([[0.0], np.cumsum(increments)])
    hits = np.flatnonzero(values - np.minimum.accumulate(values) >= h)
    assert rise_time(values, h) == (int(hits[0]) if hits.size else -1)
