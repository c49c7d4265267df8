# -*- coding: utf-8 -*-
# pylint: disable=invalid-name

"""VesselPy library.

Multi-scale 2-D Gabor (Morlet) wavelet enhancement of vessels.

The mother wavelet is

    psi(x, y) = exp(j (k0x x + k0y y)) exp(-(x**2 / eps + y**2) / 2)

with elongation eps stretching the envelope along x and k0 the frequency
offset. The daughter at scale a and angle theta is a^-1 psi evaluated on
coordinates rotated by -theta and divided by a. Each kernel has its mean
removed, so constant images give no response.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass
import math
from typing import Tuple

import numpy as np
from scipy.signal import fftconvolve


@dataclass(frozen=True)
class GaborBankParams(object):
    """
    Parameters of the Gabor wavelet bank.

    Attributes
    ----------

    scales : tuple of float, default (2, 3, 4)
        wavelet scales a in pixels

    orientations : tuple of float, default 0, 10, ..., 170
        angles in degrees

    elongation : float, default 4
        eps, envelope elongation

    k0 : (float, float), default (0, 3)
        frequency offset of the wavelet
    """

    scales: Tuple[float, ...] = (2., 3., 4.)
    orientations: Tuple[float, ...] = tuple(float(t) for t in range(0, 180, 10))
    elongation: float = 4.
    k0: Tuple[float, float] = (0., 3.)

    def __post_init__(self):
        if len(self.scales) == 0:
            raise ValueError('scales must not be empty')
        if len(self.orientations) == 0:
            raise ValueError('orientations must not be empty')
        if any(a <= 0 for a in self.scales):
            raise ValueError('scales must be positive, got {}'.format(self.scales))
        if not self.elongation > 0:
            raise ValueError('elongation must be positive, got {}'.format(self.elongation))
        if len(self.k0) != 2:
            raise ValueError('k0 must have two components')


def kernel_radius(scale, params):
    """half size of the sampled kernel: three envelope sigmas"""
    return int(math.ceil(3. * scale * max(math.sqrt(params.elongation), 1.)))


def gabor_kernel(scale, theta, params=GaborBankParams()):
    """
    Sampled, zero-mean complex Gabor wavelet.

    Parameters
    ----------

    scale : float
        scale a in pixels

    theta : float
        orientation in degrees

    params : GaborBankParams

    Returns
    -------

    kernel : ndarray of complex, shape (2r+1, 2r+1)
        rows index y, columns index x
    """

    r = kernel_radius(scale, params)
    y, x = np.mgrid[-r:r + 1, -r:r + 1].astype(float)
    t = math.radians(theta)
    c, s = math.cos(t), math.sin(t)
    u = (c * x + s * y) / scale
    v = (-s * x + c * y) / scale

    kx, ky = params.k0
    envelope = np.exp(-0.5 * (u * u / params.elongation + v * v))
    k = np.exp(1j * (kx * u + ky * v)) * envelope / scale
    return k - k.mean()


def correlate_complex(channel, kernel):
    """
    Cross-correlate a real image with a complex kernel using FFTs, with
    reflect (half-sample symmetric) padding. Output has the shape of
    `channel`.
    """

    r = kernel.shape[0] // 2
    padded = np.pad(channel, r, mode='symmetric')
    return fftconvolve(padded, kernel[::-1, ::-1], mode='valid')


def gabor_enhance(channel, params=GaborBankParams()):
    """
    Per pixel maximum over scales and orientations of the Gabor wavelet
    response modulus.

    Parameters
    ----------

    channel : ndarray (H, W)
        inverted green channel in [0, 1]

    params : GaborBankParams

    Returns
    -------

    response : ndarray (H, W), non-negative

    Examples
    --------

    >>> inv = 1. - illumination_correct(img).rgb[..., 1]
    >>> g = gabor_enhance(inv)
    """

    channel = np.asarray(channel, dtype=float)
    if channel.ndim != 2:
        raise ValueError('channel must be 2-D, got shape {}'.format(channel.shape))
    if len(params.scales) == 0 or len(params.orientations) == 0:
        raise ValueError('scale and orientation lists must not be empty')

    best = np.zeros_like(channel)
    for a in params.scales:
        for theta in params.orientations:
            response = np.abs(correlate_complex(channel, gabor_kernel(a, theta, params)))
            np.maximum(best, response, out=best)
    return best
