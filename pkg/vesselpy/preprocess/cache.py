# -*- coding: utf-8 -*-
"""VesselPy library.

Byte cache of enhanced channels beside a dataset::

    <root>/cache/<name>.ic.png       illumination corrected RGB
    <root>/cache/<name>.gabor.png    affinely requantized to bytes
    <root>/cache/<name>.line.png
    <root>/cache/<name>.stats.txt    min and max of the requantized maps

Reading back loses up to half a quantization step per pixel.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import logging
import os

import numpy as np

from vesselpy.common.errors import RasterError
from vesselpy.io.raster import FundusImage, load_image, write_gray_map, write_rgb

logger = logging.getLogger(__name__)


def cache_paths(root, name):
    """dict of the cache file paths of one image"""
    base = os.path.join(str(root), 'cache', name)
    return {k: '{}.{}.{}'.format(base, k, 'txt' if k == 'stats' else 'png')
            for k in ('ic', 'gabor', 'line', 'stats')}


def requantize(x):
    """affine map of x onto [0, 1]; returns (scaled, lo, hi)"""
    lo, hi = float(np.min(x)), float(np.max(x))
    if hi <= lo:
        return np.zeros_like(x, dtype=float), lo, hi
    return (x - lo) / (hi - lo), lo, hi


def write_channel_cache(root, name, ic, gabor, line):
    """write the enhanced channels of image `name` into `<root>/cache`"""

    paths = cache_paths(root, name)
    os.makedirs(os.path.dirname(paths['ic']), exist_ok=True)

    write_rgb(ic.rgb, paths['ic'])
    stats = []
    for key, x in (('gabor', gabor), ('line', line)):
        scaled, lo, hi = requantize(x)
        write_gray_map(scaled, paths[key])
        stats.append('{}\t{!r}\t{!r}\n'.format(key, lo, hi))
    with open(paths['stats'], 'w') as f:
        f.writelines(stats)
    logger.debug('cached channels of %s', name)
    return paths


def has_channel_cache(root, name):
    return all(os.path.isfile(p) for p in cache_paths(root, name).values())


def read_channel_cache(root, name, fov=None):
    """
    Read cached channels back.

    Returns
    -------

    ic : FundusImage

    gabor, line : ndarray (H, W)
        dequantized, within (hi - lo) / 510 of the cached values
    """

    paths = cache_paths(root, name)
    try:
        with open(paths['stats']) as f:
            stats = {}
            for row in f.read().splitlines():
                key, lo, hi = row.split('\t')
                stats[key] = (float(lo), float(hi))
    except (OSError, ValueError) as e:
        raise RasterError(paths['stats'], 'bad cache sidecar ({})'.format(e)) from e

    ic = load_image(paths['ic'])
    out = []
    for key in ('gabor', 'line'):
        lo, hi = stats[key]
        out.append(lo + (hi - lo) * _gray_values(paths[key]))
    return FundusImage(ic.rgb, fov=fov, name=name), out[0], out[1]


def _gray_values(path):
    """gray raster as floats in [0, 1]"""
    return load_image(path).rgb[..., 0]

