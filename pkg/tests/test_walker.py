"""Tests for walk simulation, hitting times and the valley coupling."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from sinai_lab.decomp import scan_left_extrema
from sinai_lab.envgen import make_env_law, sample_window, window_from_values
from sinai_lab.exceptions import RangeError
from sinai_lab.models import CapExceeded
from sinai_lab.quenched import expected_exit_time, quenched_dp, reflected_invariant
from sinai_lab.utils import HitVariant, mean_stderr, tv_distance
from sinai_lab.walker import (
    annealed_endpoints,
    batch_endpoints,
    hitting_time,
    parity_adjusted_bottom,
    simulate_coupling,
    simulate_walk,
)

seeds = st.integers(min_value=0, max_value=2**63 - 1)


@settings(max_examples=30, deadline=None)
@given(seed=seeds, start=st.integers(-20, 20), n=st.integers(0, 600))
def test_walk_parity_and_steps(seed, start, n):
    law = make_env_law("logistic-uniform", 1.0)
    window = sample_window(law, seed, -5, 5)
    result = simulate_walk(window, start, n, seed, keep_path=True)
    assert (result.endpoint - start - n) % 2 == 0
    assert result.path.size == n + 1
    assert result.path[0] == start and result.path[-1] == result.endpoint
    assert np.all(np.abs(np.diff(result.path)) == 1)
    assert result.window.contains(int(result.path.min()), int(result.path.max()))


def test_walk_is_deterministic(sampled_window):
    first = simulate_walk(sampled_window, 0, 1000, 17, keep_path=True)
    second = simulate_walk(sampled_window, 0, 1000, 17, keep_path=True)
    np.testing.assert_array_equal(first.path, second.path)
    other = simulate_walk(sampled_window, 0, 1000, 18, keep_path=True)
    assert not np.array_equal(first.path, other.path)


def test_walk_records_first_hits(sampled_window):
    targets = [-3, 0, 2, 5]
    result = simulate_walk(sampled_window, 0, 3000, 5, record=targets, keep_path=True)
    path = list(result.path)
    assert result.first_hits[0] == 0
    for site, time in result.first_hits.items():
        assert path[time] == site
        assert site not in path[:time]
    for site in targets:
        if site not in result.first_hits:
            assert site not in path


def test_walk_dump(tmp_path, sampled_window):
    target = tmp_path / "steps.bin"
    result = simulate_walk(sampled_window, 0, 1001, 9, keep_path=True, dump_to=str(target))
    bits = np.unpackbits(np.fromfile(str(target), dtype=np.uint8))
    assert bits.size == 8 * math.ceil(1001 / 8)
    np.testing.assert_array_equal(bits[:1001].astype(bool), np.diff(result.path) > 0)


def test_negative_step_count(sampled_window):
    with pytest.raises(RangeError):
        simulate_walk(sampled_window, 0, -1, 1)


def test_hitting_start_is_zero(sampled_window):
    assert hitting_time(sampled_window, 4, 4, 10, 1) == 0


def test_return_times_are_even(sampled_window):
    for seed in range(50):
        time = hitting_time(sampled_window, 0, 0, 20000, seed, HitVariant.RETURN)
        if not isinstance(time, CapExceeded):
            assert time >= 2 and time % 2 == 0


def test_cap_exceeded_is_a_value():
    window = window_from_values(np.zeros(101), -50)
    outcome = hitting_time(window, 0, 40, 5, 3)
    assert isinstance(outcome, CapExceeded)
    assert outcome.cap == 5
    assert abs(outcome.position) <= 5
    with pytest.raises(RangeError):
        hitting_time(window, 0, 40, 0, 3)


def test_mean_exit_time_matches_linear_solve():
    law = make_env_law("logistic-uniform", 0.5)
    window = sample_window(law, 2024, -20, 20)
    a, c = -6, 6
    times = [hitting_time(window, 0, [a, c], 10**6, seed) for seed in range(2000)]
    mean, stderr = mean_stderr(times)
    expected = expected_exit_time(window, a, c)[-a]
    assert abs(mean - expected) <= 4 * stderr


def test_simple_walk_variance():
    window = window_from_values(np.zeros(4001), -2000)
    endpoints = batch_endpoints(window, 0, 200, 31, 50000)
    assert np.all(endpoints % 2 == 0)
    assert abs(endpoints.var(ddof=1) / 200 - 1.0) <= 0.03


def test_walk_law_matches_dynamic_programme(two_point):
    window = sample_window(two_point, 99, -50, 50)
    n = 200
    endpoints = batch_endpoints(window, 0, n, 7, 400000)
    dist = quenched_dp(window, 0, n)
    sites, counts = np.unique(endpoints, return_counts=True)
    empirical = np.zeros(dist.sites.size)
    empirical[np.searchsorted(dist.sites, sites)] = counts / endpoints.size
    assert set(sites) <= set(dist.sites)
    assert tv_distance(empirical, dist.mass) <= 0.01


def test_annealed_endpoints(two_point):
    endpoints = annealed_endpoints(two_point, range(40), 0, 101, 5, 10**6, half_width=8)
    assert endpoints.shape == (40,)
    assert np.all(endpoints % 2 == 1)
    again = annealed_endpoints(two_point, range(40), 0, 101, 5, 10**6, half_width=8)
    np.testing.assert_array_equal(endpoints, again)


@pytest.mark.parametrize("b, n, expected", [(5, 10, 4), (5, 11, 5), (4, 11, 5), (-3, 10, -4), (-3, 11, -3)])
def test_parity_adjusted_bottom(b, n, expected):
    assert parity_adjusted_bottom(b, n) == expected


@settings(max_examples=20, deadline=None)
@given(seed=seeds, n=st.integers(3, 3000))
def test_coupling_invariants(seed, n):
    law = make_env_law("two-point", 0.3)
    window = sample_window(law, seed, -200, 200)
    record = simulate_coupling(window, n, seed, keep_paths=True)
    assert record.horizon == n
    assert record.start % 2 == n % 2
    assert record.Shat_start % 2 == n % 2
    assert record.S_path[0] == record.start and record.S_path[-1] == record.S_endpoint
    assert record.Shat_path[0] == record.Shat_start and record.Shat_path[-1] == record.Shat_endpoint
    assert np.all(np.abs(np.diff(record.S_path)) == 1)
    assert np.all(np.abs(np.diff(record.Shat_path)) == 1)
    assert record.Shat_path.min() >= record.M_minus and record.Shat_path.max() <= record.M_plus
    if record.tau_meet is not None:
        assert record.S_path[record.tau_meet] == record.Shat_path[record.tau_meet]
        end = record.tau_exit if record.tau_exit is not None else n + 1
        for t in range(record.tau_meet, min(end, n + 1)):
            assert record.S_path[t] == record.Shat_path[t]
    if record.tau_exit is not None:
        assert record.S_path[record.tau_exit] in (record.M_minus, record.M_plus)


def test_coupling_is_deterministic(sampled_window):
    first = simulate_coupling(sampled_window, 500, 3)
    second = simulate_coupling(sampled_window, 500, 3)
    assert first == second


def test_coupling_needs_three_steps(sampled_window):
    with pytest.raises(RangeError):
        simulate_coupling(sampled_window, 2, 3)


def test_reflected_walk_keeps_its_invariant_law(two_point):
    n = 20
    decomposition = scan_left_extrema(sample_window(two_point, 8, -100, 100), math.log(n), -1, 2, flank=0)
    window = decomposition.window
    records = [simulate_coupling(window, n, seed, decomposition) for seed in range(5000)]
    nu_hat = reflected_invariant(window, n, records[0].M_minus, records[0].M_plus)
    expected = nu_hat.values() * len(records)
    endpoints = np.array([record.Shat_endpoint for record in records])
    observed = np.array([np.count_nonzero(endpoints == site) for site in nu_hat.sites], dtype=float)
    assert observed.sum() == len(records)
    large = expected >= 5
    observed = np.append(observed[large], observed[~large].sum())
    expected = np.append(expected[large], expected[~large].sum())
    if expected[-1] == 0:
        observed, expected = observed[:-1], expected[:-1]
    assert stats.chisquare(observed, expected).pvalue > 0.001
