# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import numpy as np
from numpy.random import default_rng
import pytest
from scipy.stats import chisquare

from vesselpy.common.errors import ShapeError
from vesselpy.training import TrainingSet, sample_patch_batch


def _set(sizes, seed=0, channels=8):
    rng = default_rng(seed)
    stacks = [rng.standard_normal((channels, h, w)).astype(np.float32) for h, w in sizes]
    labels = [(rng.random((4, h, w)) < 0.2).astype(np.float32) for h, w in sizes]
    return TrainingSet(stacks, labels)


def test_shapes_and_crops():
    ts = _set([(80, 70), (64, 90)])
    batch = sample_patch_batch(ts, 5, 64, default_rng(1))
    assert batch.x.shape == (5, 8, 64, 64)
    assert batch.y.shape == (5, 4, 64, 64)
    for b, (i, top, left) in enumerate(batch.index):
        assert np.array_equal(batch.x[b], ts.stacks[i][:, top:top + 64, left:left + 64])
        assert np.array_equal(batch.y[b], ts.labels[i][:, top:top + 64, left:left + 64])


def test_reproducible():
    ts = _set([(70, 70), (66, 80)])
    a, b = default_rng(9), default_rng(9)
    for _ in range(3):
        ba = sample_patch_batch(ts, 4, 64, a)
        bb = sample_patch_batch(ts, 4, 64, b)
        assert np.array_equal(ba.index, bb.index)
        assert np.array_equal(ba.x, bb.x)


def test_too_small():
    with pytest.raises(ShapeError):
        sample_patch_batch(_set([(63, 100)]), 1, 64, default_rng(0))
    with pytest.raises(ValueError):
        TrainingSet([], [])


def test_uniform_offsets():
    ts = _set([(128, 128)], channels=1)
    rng = default_rng(123)
    index = np.concatenate([sample_patch_batch(ts, 100, 64, rng).index for _ in range(100)])
    tops, lefts = index[:, 1], index[:, 2]
    assert tops.min() == 0 and tops.max() == 64
    assert lefts.min() == 0 and lefts.max() == 64

    for v in (tops, lefts):
        counts = np.bincount(v, minlength=65)
        assert chisquare(counts).pvalue > 0.001

    # 5 x 5 blocks of 13 x 13 offsets
    joint = np.bincount((tops // 13) * 5 + lefts // 13, minlength=25)
    assert chisquare(joint).pvalue > 0.001


def test_image_choice_uniform():
    ts = _set([(64, 64)] * 4, channels=1)
    rng = default_rng(5)
    index = np.concatenate([sample_patch_batch(ts, 100, 64, rng).index for _ in range(40)])
    counts = np.bincount(index[:, 0], minlength=4)
    assert chisquare(counts).pvalue > 0.001
