# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import numpy as np
from numpy.random import default_rng
import pytest

from vesselpy.common.errors import ShapeError
from vesselpy.inference import tile_positions, stitch, predict_stack


def test_single_tile():
    grid = tile_positions(64, 64, 64, 10)
    assert grid.positions == [(0, 0)]


def test_fundus_dimensions():
    grid = tile_positions(584, 565, 64, 10)
    assert len(grid.rows) == 53
    assert grid.rows[0] == 0 and grid.rows[-1] == 520
    assert len(grid.cols) == 52
    assert grid.cols[-2] == 500 and grid.cols[-1] == 501
    assert len(grid) == 53 * 52


def test_row_major():
    grid = tile_positions(100, 90, 64, 10)
    assert grid.positions == sorted(grid.positions)


def test_coverage_random_dimensions():
    rng = default_rng(0)
    for _ in range(500):
        patch = int(rng.integers(1, 20))
        h = int(rng.integers(patch, 60))
        w = int(rng.integers(patch, 60))
        stride = int(rng.integers(1, patch + 1))
        grid = tile_positions(h, w, patch, stride)
        assert grid.coverage().min() >= 1
        assert grid.rows[-1] == h - patch and grid.cols[-1] == w - patch


def test_stride_longer_than_patch():
    rng = default_rng(1)
    for _ in range(100):
        patch = int(rng.integers(1, 20))
        stride = int(rng.integers(patch + 1, 40))
        with pytest.raises(ValueError):
            tile_positions(60, 60, patch, stride)
    with pytest.raises(ValueError):
        tile_positions(64, 64, 16, 0)


def test_too_small():
    with pytest.raises(ShapeError):
        tile_positions(63, 100, 64, 10)


def test_mean_of_overlap():
    tiles = np.stack([np.full((1, 2, 2), 0.4), np.full((1, 2, 2), 0.6)])
    mean, coverage = stitch([(0, 0), (0, 1)], tiles, (2, 3))
    assert abs(mean[0, 0, 1] - 0.5) < 1e-15
    assert mean[0, 0, 0] == 0.4
    assert mean[0, 0, 2] == 0.6
    assert np.array_equal(coverage, [[1, 2, 1], [1, 2, 1]])


def test_order_invariant():
    rng = default_rng(1)
    grid = tile_positions(40, 37, 16, 5)
    tiles = rng.random((len(grid), 2, 16, 16))
    a, _ = stitch(grid.positions, tiles, (40, 37))
    perm = rng.permutation(len(grid))
    b, _ = stitch([grid.positions[i] for i in perm], tiles[perm], (40, 37))
    assert np.array_equal(a, b)


def test_uncovered():
    with pytest.raises(ShapeError):
        stitch([(0, 0)], np.zeros((1, 1, 2, 2)), (3, 3))


def test_constant_stub():
    channels = default_rng(2).standard_normal((8, 50, 45))
    stub = lambda x: np.full((len(x), 3, 16, 16), 0.37)
    for stride in (1, 3, 10, 16):
        mean, coverage = predict_stack(channels, stub, 16, stride, batch_size=7)
        assert coverage.min() >= 1
        assert np.max(np.abs(mean - 0.37)) < 1e-12


def test_threads_identical():
    rng = default_rng(3)
    channels = rng.standard_normal((2, 40, 40))
    fn = lambda x: np.tanh(x[:, :1] * 0.5 + x[:, 1:])
    a = predict_stack(channels, fn, 16, 4, batch_size=5, threads=1)[0]
    b = predict_stack(channels, fn, 16, 4, batch_size=5, threads=4)[0]
    assert np.array_equal(a, b)
