# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import numpy as np
from numpy.random import default_rng
import pytest
from scipy.ndimage import correlate

from vesselpy.preprocess import GaborBankParams, gabor_kernel, gabor_enhance
from vesselpy.preprocess.gabor import kernel_radius


def dense_enhance(channel, params):
    """direct spatial correlation, used as the oracle"""
    best = np.zeros_like(channel)
    for a in params.scales:
        for theta in params.orientations:
            k = gabor_kernel(a, theta, params)
            re = correlate(channel, k.real, mode='reflect')
            im = correlate(channel, k.imag, mode='reflect')
            best = np.maximum(best, np.hypot(re, im))
    return best


def test_kernels_are_dc_free():
    p = GaborBankParams()
    for a in p.scales:
        for theta in (0., 30., 90.):
            k = gabor_kernel(a, theta, p)
            assert abs(k.sum()) < 1e-9
            assert k.shape == (2 * kernel_radius(a, p) + 1,) * 2


def test_constant_input():
    out = gabor_enhance(np.full((40, 40), 0.7))
    assert out.shape == (40, 40)
    assert np.max(out) < 1e-9


def test_fft_matches_dense_oracle():
    rng = default_rng(4)
    p = GaborBankParams(scales=(2., 3.), orientations=(0., 40., 90., 130.))
    x = rng.random((32, 32))
    assert np.max(np.abs(gabor_enhance(x, p) - dense_enhance(x, p))) < 1e-6


def test_vertical_line():
    x = np.zeros((64, 64))
    x[:, 31:33] = 1.
    out = gabor_enhance(x)
    assert np.all(out >= 0.)
    on = out[32, 31]
    off = out[32, 21]
    assert on >= 5 * off

    # one scale, one orientation against the dense oracle as well
    p = GaborBankParams(scales=(2.,), orientations=(90.,))
    dense = dense_enhance(x, p)
    assert dense[32, 31] >= 5 * dense[32, 21]


def test_rotation():
    rng = default_rng(6)
    x = rng.random((48, 48))
    p = GaborBankParams(scales=(2.,))
    a = gabor_enhance(x, p)
    b = gabor_enhance(np.rot90(x), p)
    r = kernel_radius(2., p)
    assert np.max(np.abs(np.rot90(a) - b)[r:-r, r:-r]) < 1e-6


def test_translation_equivariance():
    rng = default_rng(7)
    big = rng.random((60, 60))
    p = GaborBankParams(scales=(2.,))
    r = kernel_radius(2., p)
    a = gabor_enhance(big[:48, :48], p)
    b = gabor_enhance(big[4:52, 6:54], p)
    # b[i, j] sees the same neighbourhood as a[i + 4, j + 6]
    diff = b[r:48 - r - 4, r:48 - r - 6] - a[r + 4:48 - r, r + 6:48 - r]
    assert np.max(np.abs(diff)) < 1e-6


def test_bad_params():
    with pytest.raises(ValueError):
        GaborBankParams(scales=())
    with pytest.raises(ValueError):
        GaborBankParams(orientations=())
    with pytest.raises(ValueError):
        GaborBankParams(elongation=0.)
