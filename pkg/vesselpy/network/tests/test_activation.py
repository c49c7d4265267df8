# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import numpy as np

from vesselpy.autodiff import Tensor
from vesselpy.network import spatial_activation, activation_max, normalized_activation


def test_endpoints_are_one():
    m = spatial_activation(np.array([0., 1.]), 1.)
    assert m[0] == 1.
    assert m[1] == 1.


def test_peak():
    m = spatial_activation(np.array([0.5]), 1.)[0]
    assert abs(m - 1.221199) < 1e-6
    assert abs(m - activation_max(1.)) < 1e-15


def test_symmetry():
    d = np.linspace(0., 0.5, 501)
    assert np.max(np.abs(spatial_activation(0.5 + d) - spatial_activation(0.5 - d))) <= 1e-12


def test_monotone():
    x = np.arange(0, 1001) * 1e-3
    m = spatial_activation(x)
    assert np.all(np.diff(m[:501]) > 0)
    assert np.all(np.diff(m[500:]) < 0)


def test_range():
    x = np.linspace(0., 1., 1001)
    for sigma in (0.5, 1., 2.):
        m = spatial_activation(x, sigma)
        assert m.min() >= 1.
        assert m.max() <= activation_max(sigma) + 1e-15


def test_tensor_input():
    t = Tensor(np.array([[0.25]]), requires_grad=True)
    out = spatial_activation(t, 1.)
    assert isinstance(out, Tensor)
    assert out.requires_grad


def test_normalized():
    n = normalized_activation(spatial_activation(np.array([0., 0.5, 1.])))
    assert np.allclose(n, [0., 1., 0.])
    assert np.all(normalized_activation(np.ones(3), 0.) == 0.)
