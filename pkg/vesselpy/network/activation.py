# -*- coding: utf-8 -*-
"""VesselPy library.

The spatial activation m(x) = sigma (exp(-(x - 0.5)^2) - exp(-1/4)) + 1.

Pixels the vessel branch is unsure about (x near 0.5) get their A/V
features amplified; confident pixels, vessel or background, pass
unchanged.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import numpy as np

from vesselpy.autodiff.ops import gauss_act
from vesselpy.autodiff.tensor import Tensor


def activation_max(sigma=1.):
    """m(0.5) = 1 + sigma (1 - exp(-1/4)), the largest value of m on [0, 1]"""
    return 1. + sigma * (1. - np.exp(-0.25))


def spatial_activation(x, sigma=1.):
    """
    Spatial activation of vessel probabilities.

    Parameters
    ----------

    x : Tensor or array_like
        vessel probabilities in [0, 1]

    sigma : float
        activation factor

    Returns
    -------

    m : Tensor if `x` is a Tensor, otherwise ndarray
        values in [1, activation_max(sigma)], m(0) = m(1) = 1

    Examples
    --------

    >>> spatial_activation(np.array([0., 1.]))
    array([1., 1.])
    """

    if isinstance(x, Tensor):
        return gauss_act(x, sigma)
    return gauss_act(Tensor(np.asarray(x, dtype=float)), sigma).data


def normalized_activation(m, sigma=1.):
    """map activation values onto [0, 1] for display; zeros when sigma is 0"""
    m = np.asarray(m, dtype=float)
    if sigma == 0:
        return np.zeros_like(m)
    return np.clip((m - 1.) / (activation_max(sigma) - 1.), 0., 1.)
