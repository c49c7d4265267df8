# -*- coding: utf-8 -*-
"""VesselPy library.

Illumination correction by large-scale Gaussian background subtraction.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import numpy as np
from scipy.ndimage import gaussian_filter

from vesselpy.io.raster import FundusImage


def default_background_sigma(height, width):
    """max(H, W) / 30, the default background scale"""
    return max(height, width) / 30.


def illumination_correct(img, background_sigma=None):
    """
    Remove slowly varying brightness from a fundus image.

    Each channel is replaced by

        clip(x - G_sigma * x + mean(x), 0, 1)

    where G_sigma * x is a Gaussian blur with reflect padding, so the
    local background is subtracted and the channel mean is restored.

    Parameters
    ----------

    img : FundusImage

    background_sigma : float, optional
        Gaussian sigma in pixels of the background estimate. Defaults to
        max(H, W) / 30.

    Returns
    -------

    ic : FundusImage
        same dimensions and fov as `img`
    """

    if background_sigma is None:
        background_sigma = default_background_sigma(*img.shape)
    if not background_sigma > 0:
        raise ValueError('background_sigma must be positive, got {}'.format(background_sigma))

    out = np.empty_like(img.rgb)
    for c in range(3):
        x = img.rgb[..., c]
        background = gaussian_filter(x, background_sigma, mode='reflect')
        out[..., c] = np.clip(x - background + x.mean(), 0., 1.)

    return FundusImage(out, fov=img.fov, name=img.name)
