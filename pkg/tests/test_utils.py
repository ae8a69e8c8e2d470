"""Tests for the random streams, statistics helpers and chunking."""
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sinai_lab.experiments import chunk_bounds, run_chunks
from sinai_lab.utils import (
    BLOCK_SIZE,
    Streams,
    binomial_stderr,
    combined_stderr,
    mean_stderr,
    product_stderr,
    ratio_stderr,
    replicate_seed,
    site_uniforms,
    stream_generator,
    to_builtin,
    tv_distance,
    within,
    zigzag,
)


def _span(start, stop, offset):
    return stop - start + offset


def test_zigzag():
    assert [zigzag(value) for value in (0, -1, 1, -2, 2)] == [0, 1, 2, 3, 4]


@given(lo=st.integers(-5000, 5000), width=st.integers(0, 3000), cut=st.integers(0, 3000))
def test_site_uniforms_do_not_depend_on_the_request(lo, width, cut):
    cut = min(cut, width)
    whole = site_uniforms(7, lo, lo + width)
    assert whole.size == width + 1
    left = site_uniforms(7, lo, lo + cut)
    np.testing.assert_array_equal(whole[: cut + 1], left)
    if cut < width:
        right = site_uniforms(7, lo + cut + 1, lo + width)
        np.testing.assert_array_equal(whole[cut + 1:], right)


def test_blocks_meet_at_their_boundary():
    across = site_uniforms(3, BLOCK_SIZE - 2, BLOCK_SIZE + 1)
    np.testing.assert_array_equal(across[:2], site_uniforms(3, BLOCK_SIZE - 2, BLOCK_SIZE - 1))
    np.testing.assert_array_equal(across[2:], site_uniforms(3, BLOCK_SIZE, BLOCK_SIZE + 1))
    assert not np.array_equal(site_uniforms(3, 0, 9), site_uniforms(4, 0, 9))


def test_streams_are_keyed():
    assert replicate_seed(1, Streams.WALK, 5) == replicate_seed(1, Streams.WALK, 5)
    assert replicate_seed(1, Streams.WALK, 5) != replicate_seed(1, Streams.WALK, 6)
    assert replicate_seed(1, Streams.WALK, 5) != replicate_seed(1, Streams.RACE, 5)
    assert 0 <= replicate_seed(2**64 - 1, Streams.LLT, 0) < 2**64
    first = stream_generator(9, 1, 2).random(4)
    np.testing.assert_array_equal(first, stream_generator(9, 1, 2).random(4))


def test_chunk_bounds():
    assert chunk_bounds(600) == [(0, 256), (256, 512), (512, 600)]
    assert chunk_bounds(5, 2, first=10) == [(10, 12), (12, 14), (14, 15)]
    assert chunk_bounds(0) == []


def test_run_chunks_keeps_chunk_order():
    bounds = chunk_bounds(10, 3)
    assert run_chunks(_span, bounds, 1, 100) == [103, 103, 103, 101]
    assert run_chunks(_span, bounds, 2, 100) == [103, 103, 103, 101]


def test_mean_stderr():
    mean, stderr = mean_stderr([1.0, 2.0, 3.0, 4.0])
    assert mean == 2.5
    assert stderr == pytest.approx(math.sqrt(5 / 3) / 2)
    assert mean_stderr([4.0]) == (4.0, 0.0)
    assert all(math.isnan(value) for value in mean_stderr([]))


def test_binomial_and_combined_errors():
    assert binomial_stderr(0.5, 100) == pytest.approx(0.05)
    assert math.isnan(binomial_stderr(0.5, 0))
    assert combined_stderr(3.0, 4.0) == 5.0
    assert product_stderr(2.0, 0.1, 3.0, 0.2) == pytest.approx(math.sqrt(0.09 + 0.16))
    assert within(1.0, 1.2, 0.1)
    assert not within(1.0, 1.4, 0.1)


def test_ratio_stderr():
    ratio, stderr = ratio_stderr([1.0, 1.0, 1.0], [2.0, 2.0, 2.0])
    assert ratio == 0.5 and stderr == pytest.approx(0.0, abs=1e-15)
    ratio, stderr = ratio_stderr([1.0, 0.0, 1.0, 0.0], [2.0, 1.0, 3.0, 2.0])
    assert ratio == pytest.approx(0.25)
    assert stderr > 0


def test_tv_distance():
    assert tv_distance([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert tv_distance([1.0, 0.0], [0.0, 1.0]) == 1.0


def test_to_builtin():
    data = {"a": np.int64(3), "b": np.array([1.5, np.nan]), "c": (np.bool_(True), Streams.LLT), 4: np.float32(0.5)}
    assert to_builtin(data) == {"a": 3, "b": [1.5, None], "c": [True, 10], "4": 0.5}
