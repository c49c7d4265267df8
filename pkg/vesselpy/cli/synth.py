# -*- coding: utf-8 -*-
# pylint: disable=invalid-name, too-many-locals

"""VesselPy library.

Synthetic fundus images with exact artery/vein ground truth.

Vessel trees are smooth random walks from a common disc region, each
with a few thinner branches. Arteries are narrower and lighter with a
bright central reflex line; veins are wider and darker. They are drawn
on a low frequency textured background under a radial illumination
falloff inside a circular field of view. Where an artery and a vein
overlap the label is uncertain.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass
import logging
import os

import numpy as np
from numpy.random import default_rng
from scipy import ndimage
from scipy.spatial import cKDTree

from vesselpy.common.helpers import ordered_map
from vesselpy.io.dataset import index_dataset, write_manifest
from vesselpy.io.raster import LabelTriMap, write_label, write_mask, write_rgb

logger = logging.getLogger(__name__)

#: accepted range of the vessel pixel fraction of a generated image
VESSEL_FRACTION = (0.02, 0.15)

_MAX_ATTEMPTS = 50

# fundus background color and per channel vessel absorption
_BASE_RGB = np.array([0.78, 0.42, 0.22])
_ABSORPTION = np.array([0.45, 1.0, 0.7])


@dataclass(frozen=True)
class SynthSpec(object):
    """
    Synthetic dataset parameters.

    Attributes
    ----------

    n_images : int, default=40

    height, width : int, default=128

    trees : int, default=4
        vessel trees per image, alternating artery and vein

    branches : int, default=2
        side branches per tree

    min_width, max_width : float, default 1 and 4
        vessel width range in pixels

    artery_contrast, vein_contrast : float
        peak darkening of the green channel at the vessel center

    vein_width_factor : float, default=1.4
        veins are this much wider than arteries

    reflex : float, default=0.5
        fraction of the artery darkening removed along its central line

    texture : float, default=0.04
        amplitude of the background texture

    illumination : float, default=0.35
        darkening at the border of the field of view

    test_fraction : float, default=0.25
        share of the images (the last ones) in the test split

    seed : int, default=0
    """

    n_images: int = 40
    height: int = 128
    width: int = 128
    trees: int = 4
    branches: int = 2
    min_width: float = 1.
    max_width: float = 4.
    artery_contrast: float = 0.22
    vein_contrast: float = 0.32
    vein_width_factor: float = 1.4
    reflex: float = 0.5
    texture: float = 0.04
    illumination: float = 0.35
    test_fraction: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if self.n_images < 1 or self.trees < 2 or self.branches < 0:
            raise ValueError('need n_images >= 1, trees >= 2 and branches >= 0')
        if self.height < 16 or self.width < 16:
            raise ValueError('images must be at least 16x16')
        if not 1. <= self.min_width <= self.max_width:
            raise ValueError('widths must satisfy 1 <= min_width <= max_width')
        if not 0. <= self.test_fraction < 1.:
            raise ValueError('test_fraction must be in [0, 1)')

    @property
    def n_test(self):
        return int(np.ceil(self.n_images * self.test_fraction))


def _walk(rng, start, heading, length, turn):
    """smooth random walk of unit steps; returns (n, 2) points as (row, col)"""
    n = max(int(length), 2)
    dtheta = ndimage.gaussian_filter1d(rng.normal(0., turn, n), 4., mode='nearest')
    theta = heading + np.cumsum(dtheta)
    steps = np.stack([np.sin(theta), np.cos(theta)], axis=1)
    return start + np.cumsum(steps, axis=0)


def _densify(points, widths, step=0.25):
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    s = np.concatenate([[0.], np.cumsum(seg)])
    t = np.arange(0., s[-1], step)
    pts = np.stack([np.interp(t, s, points[:, 0]), np.interp(t, s, points[:, 1])], axis=1)
    return pts, np.interp(t, s, widths)


def _curves(spec, rng, disc, fov_radius):
    """(points, widths, is_artery) of every trunk and branch"""

    out = []
    size = min(spec.height, spec.width)
    for k in range(spec.trees):
        artery = k % 2 == 0
        heading = 2 * np.pi * (k + rng.uniform(0.2, 0.8)) / spec.trees
        length = rng.uniform(0.6, 0.9) * fov_radius + 0.2 * size
        w0 = rng.uniform(0.6, 1.) * spec.max_width
        if artery:
            w0 /= spec.vein_width_factor
        w0 = np.clip(w0, spec.min_width, spec.max_width)
        trunk = _walk(rng, disc, heading, length, 0.08)
        widths = np.linspace(w0, max(spec.min_width, 0.5 * w0), len(trunk))
        out.append((trunk, widths, artery))

        for _ in range(spec.branches):
            i = int(rng.integers(len(trunk) // 5, 3 * len(trunk) // 4))
            side = rng.choice([-1., 1.])
            d = trunk[min(i + 1, len(trunk) - 1)] - trunk[i - 1]
            angle = np.arctan2(d[0], d[1]) + side * rng.uniform(0.4, 1.0)
            branch = _walk(rng, trunk[i], angle, rng.uniform(0.3, 0.6) * length, 0.12)
            bw = max(spec.min_width, 0.7 * widths[i])
            out.append((branch, np.linspace(bw, spec.min_width, len(branch)), artery))
    return out


def _render_curve(spec, pixels, points, widths):
    """distance to the centerline over radius, inf away from the vessel"""

    pts, w = _densify(points, widths)
    tree = cKDTree(pts)
    d, idx = tree.query(pixels, distance_upper_bound=spec.max_width)
    rel = np.full(len(pixels), np.inf)
    hit = np.isfinite(d)
    # radius at least half a pixel so 1 px vessels cover their centerline
    radius = np.maximum(w[idx[hit]] / 2., 0.5)
    rel[hit] = d[hit] / radius
    return rel.reshape(spec.height, spec.width)


def _one_image(spec, index):
    rng = default_rng([spec.seed, index])
    H, W = spec.height, spec.width
    rows, cols = np.mgrid[0:H, 0:W]
    pixels = np.stack([rows.ravel(), cols.ravel()], axis=1).astype(float)
    center = np.array([(H - 1) / 2., (W - 1) / 2.])
    fov_radius = 0.48 * min(H, W)
    r = np.hypot(rows - center[0], cols - center[1])
    fov = r <= fov_radius

    for attempt in range(_MAX_ATTEMPTS):
        disc = center + rng.uniform(-0.35, 0.35, 2) * fov_radius
        darkening = np.zeros((H, W))
        masks = {True: np.zeros((H, W), dtype=bool), False: np.zeros((H, W), dtype=bool)}
        for points, widths, artery in _curves(spec, rng, disc, fov_radius):
            rel = _render_curve(spec, pixels, points, widths)
            inside = rel <= 1.
            profile = np.where(inside, 1. - rel ** 2, 0.)
            if artery:
                profile = profile * (1. - spec.reflex * (rel < 0.35))
                contrast = spec.artery_contrast
            else:
                contrast = spec.vein_contrast
            darkening = np.maximum(darkening, contrast * profile)
            masks[artery] |= inside

        artery = masks[True] & fov
        vein = masks[False] & fov
        uncertain = artery & vein
        vessel = artery | vein
        fraction = vessel.mean()
        if (artery & ~uncertain).any() and (vein & ~uncertain).any() and \
                VESSEL_FRACTION[0] <= fraction <= VESSEL_FRACTION[1]:
            break
        logger.debug('image %d attempt %d rejected, vessel fraction %.3f',
                     index, attempt, fraction)
    else:
        raise RuntimeError('could not generate image {} within the vessel fraction range; '
                           'adjust trees, branches or widths'.format(index))

    texture = ndimage.gaussian_filter(rng.standard_normal((H, W)), min(H, W) / 16.)
    texture *= spec.texture / max(np.abs(texture).max(), 1e-12)
    light = 1. - spec.illumination * (r / fov_radius) ** 2
    shading = (light + texture)[..., None]
    rgb = shading * _BASE_RGB * (1. - darkening[..., None] * _ABSORPTION)
    rgb = np.clip(rgb, 0., 1.) * fov[..., None]

    tri = LabelTriMap(vessel, artery & ~uncertain, vein & ~uncertain, uncertain)
    return rgb, tri, fov


def synth_dataset(spec, root, threads=1):
    """
    Generate a dataset root with images, labels, fov masks and manifest.

    Image i depends only on (spec.seed, i), so the same spec always
    writes byte-identical files, whatever `threads` is.

    Parameters
    ----------

    spec : SynthSpec

    root : str
        created if needed

    threads : int

    Returns
    -------

    index : DatasetIndex
        every generated image, split None
    """

    root = str(root)
    for sub in ('images', 'labels', 'fov'):
        os.makedirs(os.path.join(root, sub), exist_ok=True)

    names = ['synth_{:03d}'.format(i) for i in range(spec.n_images)]

    def one(i):
        rgb, tri, fov = _one_image(spec, i)
        write_rgb(rgb, os.path.join(root, 'images', names[i] + '.png'))
        write_label(tri, os.path.join(root, 'labels', names[i] + '.png'))
        write_mask(fov, os.path.join(root, 'fov', names[i] + '.png'))
        return float(tri.vessel.mean())

    fractions = ordered_map(one, range(spec.n_images), threads)
    first_test = spec.n_images - spec.n_test
    write_manifest(root, [(n, 'test' if i >= first_test else 'train')
                          for i, n in enumerate(names)])
    logger.info('generated %d images under %s, vessel fraction %.3f to %.3f',
                spec.n_images, root, min(fractions), max(fractions))
    return index_dataset(root, None)
