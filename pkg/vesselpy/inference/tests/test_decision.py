# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import numpy as np
from numpy.random import default_rng
import pytest
from scipy import ndimage

from vesselpy.inference import TriProbMap, decide_av, skeletonize


def _tri(vessel, artery, vein):
    vessel, artery, vein = (np.atleast_2d(np.asarray(v, dtype=float)) for v in (vessel, artery, vein))
    return TriProbMap(vessel, artery, vein, np.ones(vessel.shape, dtype=int))


def test_artery_vein_rule():
    d = decide_av(_tri([0.9, 0.9, 0.9], [0.6, 0.5, 0.2], [0.4, 0.5, 0.7]))
    assert d.artery.tolist() == [[True, True, False]]
    assert d.vein.tolist() == [[False, False, True]]


def test_below_threshold_is_background():
    d = decide_av(_tri([0.49], [0.9], [0.1]), 0.5, 'detected')
    assert not d.vessel.any() and not d.artery.any() and not d.vein.any()
    g = decide_av(_tri([0.49], [0.9], [0.1]), 0.5, 'gt_pixels')
    assert g.artery.all()


def test_bad_arguments():
    with pytest.raises(ValueError):
        decide_av(_tri([0.5], [0.5], [0.5]), 1.)
    with pytest.raises(ValueError):
        decide_av(_tri([0.5], [0.5], [0.5]), 0.)
    with pytest.raises(ValueError):
        decide_av(_tri([0.5], [0.5], [0.5]), 0.5, 'skeleton')


def test_scale_invariant():
    rng = default_rng(0)
    v, a, b = rng.random((3, 30, 30))
    base = decide_av(_tri(v, a, b))
    for c in (1e-3, 0.37, 2.5, 1e3):
        d = decide_av(_tri(v, a * c, b * c))
        assert np.array_equal(d.artery, base.artery)
        assert np.array_equal(d.vein, base.vein)


def test_partition():
    rng = default_rng(1)
    d = decide_av(_tri(*rng.random((3, 20, 20))))
    assert not np.any(d.artery & d.vein)
    assert np.array_equal(d.artery | d.vein, d.vessel)


def test_skeleton_empty():
    assert not skeletonize(np.zeros((10, 10), dtype=bool)).any()


def test_skeleton_bar():
    mask = np.zeros((7, 13), dtype=bool)
    mask[2:5, 2:11] = True
    sk = skeletonize(mask)
    rows, cols = np.nonzero(sk)
    assert set(rows.tolist()) == {3}
    assert len(cols) >= 5
    assert np.array_equal(np.sort(cols), np.arange(cols.min(), cols.max() + 1))
    assert np.all(mask[sk])


def _components(mask):
    return ndimage.label(mask, structure=np.ones((3, 3)))[1]


def _drop_small(mask, size):
    labels, n = ndimage.label(mask, structure=np.ones((3, 3)))
    sizes = np.bincount(labels.ravel(), minlength=n + 1)
    keep = sizes >= size
    keep[0] = False
    return keep[labels]


def test_skeleton_bar_centerline():
    mask = np.zeros((7, 13), dtype=bool)
    mask[2:5, 2:11] = True
    rows, cols = np.nonzero(skeletonize(mask))
    assert rows.tolist() == [3] * 6
    assert cols.tolist() == list(range(3, 9))


def test_skeleton_small_block_survives():
    mask = np.zeros((6, 6), dtype=bool)
    mask[2:4, 2:4] = True
    sk = skeletonize(mask)
    assert sk.sum() == 1
    assert np.all(mask[sk])


def test_skeleton_ring_keeps_hole():
    yy, xx = np.mgrid[:32, :32]
    r = np.hypot(yy - 15.5, xx - 15.5)
    mask = (r >= 6) & (r <= 10)
    sk = skeletonize(mask)
    assert np.all(mask[sk])
    assert _components(sk) == 1
    # inside and outside stay separate 4-connected background regions
    assert ndimage.label(~sk)[1] == 2


def test_skeleton_keeps_components():
    rng = default_rng(2)
    for _ in range(30):
        field = ndimage.gaussian_filter(rng.standard_normal((48, 48)), 2.)
        mask = _drop_small(field > 0.1, 20)
        sk = skeletonize(mask)
        assert np.all(mask[sk])
        assert _components(sk) == _components(mask)
