# -*- coding: utf-8 -*-
"""VesselPy library.

Multi-scale line detector. For a line length L the raw response at a pixel
is the best mean intensity along a length-L line through the pixel, over
all orientations, minus the mean of the surrounding window. The combined
response averages the standardized raw responses of every length with the
standardized input.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass
import math
from typing import Tuple

import numpy as np
from scipy.ndimage import correlate, uniform_filter
from skimage.draw import line as draw_line

from vesselpy.preprocess.stack import standardize


@dataclass(frozen=True)
class LineDetectorParams(object):
    """
    Attributes
    ----------

    window : int, default 15
        side of the square averaging window, odd

    lengths : tuple of int, default 1, 3, ..., 15
        line lengths, odd and no longer than `window`

    orientations : tuple of float, default 0, 15, ..., 165
        line angles in degrees
    """

    window: int = 15
    lengths: Tuple[int, ...] = tuple(range(1, 16, 2))
    orientations: Tuple[float, ...] = tuple(float(t) for t in range(0, 180, 15))

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError('window must be a positive odd integer, got {}'.format(self.window))
        if len(self.lengths) == 0:
            raise ValueError('lengths must not be empty')
        for L in self.lengths:
            if L < 1 or L % 2 == 0 or L > self.window:
                raise ValueError('line length {} must be odd and at most the window {}'.format(
                    L, self.window))
        if len(self.orientations) == 0:
            raise ValueError('orientations must not be empty')


def line_kernel(length, theta):
    """
    Averaging kernel of a digital line of `length` pixels through the
    center, at `theta` degrees counter-clockwise from the x axis.

    Returns
    -------

    kernel : ndarray (length, length), sums to 1
    """

    h = (length - 1) // 2
    t = math.radians(theta)
    dr = int(round(h * math.sin(t)))
    dc = int(round(h * math.cos(t)))
    k = np.zeros((length, length))
    rr, cc = draw_line(h + dr, h - dc, h - dr, h + dc)
    k[rr, cc] = 1.
    return k / k.sum()


def line_responses(channel, params=LineDetectorParams()):
    """
    Raw responses R_L, one per line length, before standardization.

    Returns
    -------

    responses : ndarray (len(params.lengths), H, W)
    """

    channel = np.asarray(channel, dtype=float)
    window_mean = uniform_filter(channel, size=params.window, mode='reflect')

    out = np.empty((len(params.lengths),) + channel.shape)
    for i, L in enumerate(params.lengths):
        best = None
        for theta in params.orientations:
            r = correlate(channel, line_kernel(L, theta), mode='reflect')
            best = r if best is None else np.maximum(best, r)
        out[i] = best - window_mean
    return out


def line_detect(channel, params=LineDetectorParams()):
    """
    Combined multi-scale line detector response.

    Parameters
    ----------

    channel : ndarray (H, W)
        inverted green channel

    params : LineDetectorParams

    Returns
    -------

    response : ndarray (H, W)
        (sum_L standardize(R_L) + standardize(channel)) / (n_lengths + 1)
    """

    channel = np.asarray(channel, dtype=float)
    if channel.ndim != 2:
        raise ValueError('channel must be 2-D, got shape {}'.format(channel.shape))

    total = standardize(channel)
    for R in line_responses(channel, params):
        total = total + standardize(R)
    return total / (len(params.lengths) + 1)
