"""Shared fixtures for the lab tests."""
import numpy as np
import pytest

from sinai_lab.envgen import make_env_law, sample_window, window_from_values


def split_bottom_values(h: int) -> tuple[list[float], int]:
    """Potential on [-h-1, 2h+2] where b_h = -1 while b_h^(K) = 0.

    V(-1) = V(0) = V(1) = 0, V(k) = k - 1 on [1, h+1], V(k) = |k| - 1 on
    [-h, -1] and V(-h-1) = h + 1; the right end falls back by h + 1 so that
    x_1 = h + 1 is certified.
    """
    values = {-h - 1: h + 1}
    for k in range(-h, 0):
        values[k] = abs(k) - 1
    values[0] = 0
    for k in range(1, h + 2):
        values[k] = k - 1
    for j in range(1, h + 2):
        values[h + 1 + j] = h - j
    lo = -h - 1
    return [float(values[k]) for k in range(lo, max(values) + 1)], lo


@pytest.fixture
def two_point():
    return make_env_law("two-point", 0.3)


@pytest.fixture
def logistic():
    return make_env_law("logistic-uniform", 1.0)


@pytest.fixture
def v_window():
    """V(k) = |k| on [-10, 10]."""
    return window_from_values([abs(k) for k in range(-10, 11)], -10)


@pytest.fixture
def flat_window():
    return window_from_values(np.zeros(41), -20)


@pytest.fixture
def sampled_window(logistic):
    return sample_window(logistic, 20240601, -60, 60)
