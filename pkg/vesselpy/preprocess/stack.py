# -*- coding: utf-8 -*-
"""VesselPy library.

The standardized eight channel network input.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass

import numpy as np

from vesselpy.common.errors import ShapeError
from vesselpy.common.helpers import pretty_str

#: channel order of an InputStack
CHANNEL_NAMES = ('R', 'G', 'B', 'R_ic', 'G_ic', 'B_ic', 'gabor', 'line')


def channel_stats(x):
    """(mean, population std) of an array"""
    x = np.asarray(x, dtype=float)
    return float(x.mean()), float(x.std())


def is_constant(mean, std):
    """near-constant test used by `standardize`"""
    return std <= 1e-12 * (1. + abs(mean))


def standardize(x):
    """
    Shift and scale to mean 0 and population standard deviation 1.
    Constant (or numerically constant) inputs map to all zeros.
    """

    x = np.asarray(x, dtype=float)
    mean, std = channel_stats(x)
    if is_constant(mean, std):
        return np.zeros_like(x)
    return (x - mean) / std


@dataclass(repr=False)
class InputStack(object):
    """
    Attributes
    ----------

    channels : ndarray (8, H, W)
        standardized channels in `CHANNEL_NAMES` order

    means, stds : ndarray (8,)
        statistics each channel was standardized with; std is 0 for
        channels that were constant
    """

    channels: np.ndarray
    means: np.ndarray
    stds: np.ndarray

    @property
    def shape(self):
        return self.channels.shape[1:]

    def __repr__(self):
        return '\n'.join([
            'InputStack object',
            pretty_str('shape', self.shape),
            pretty_str('means', self.means),
            pretty_str('stds', self.stds),
        ])


def build_stack(orig, ic, gabor, line):
    """
    Assemble the network input.

    Parameters
    ----------

    orig : FundusImage
        original image

    ic : FundusImage
        illumination corrected image

    gabor : ndarray (H, W)
        Gabor enhancement

    line : ndarray (H, W)
        line detector response

    Returns
    -------

    stack : InputStack
        channels R, G, B, R_ic, G_ic, B_ic, gabor, line, each standardized
        over the image
    """

    shape = orig.shape
    gabor = np.asarray(gabor, dtype=float)
    line = np.asarray(line, dtype=float)
    for name, s in (('ic', ic.shape), ('gabor', gabor.shape), ('line', line.shape)):
        if tuple(s) != tuple(shape):
            raise ShapeError('{} has shape {}, image has {}'.format(name, s, shape))

    raw = [orig.rgb[..., 0], orig.rgb[..., 1], orig.rgb[..., 2],
           ic.rgb[..., 0], ic.rgb[..., 1], ic.rgb[..., 2], gabor, line]

    channels = np.empty((len(raw),) + tuple(shape))
    means = np.empty(len(raw))
    stds = np.empty(len(raw))
    for i, x in enumerate(raw):
        means[i], stds[i] = channel_stats(x)
        if is_constant(means[i], stds[i]):
            stds[i] = 0.
        channels[i] = standardize(x)
    return InputStack(channels, means, stds)
