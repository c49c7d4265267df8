# -*- coding: utf-8 -*-
"""VesselPy library.

Per-pixel artery/vein decisions from stitched probabilities, and
skeletonization for centerline evaluation.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from vesselpy.common.helpers import pretty_str

AV_MODES = ('gt_pixels', 'detected')


@dataclass
class AVDecision(object):
    """
    Boolean decision rasters.

    vessel : p_vessel >= threshold
    artery, vein : disjoint. In 'detected' mode they partition `vessel`;
        in 'gt_pixels' mode they partition the whole image and the
        evaluator picks the pixels to score.
    """

    vessel: np.ndarray
    artery: np.ndarray
    vein: np.ndarray
    mode: str = 'detected'

    def __repr__(self):
        return '\n'.join([
            'AVDecision object',
            pretty_str('mode', self.mode),
            pretty_str('vessel pixels', int(self.vessel.sum())),
            pretty_str('artery pixels', int(self.artery.sum())),
            pretty_str('vein pixels', int(self.vein.sum())),
        ])


def decide_av(tri, threshold=0.5, mode='detected'):
    """
    Threshold the vessel map and label pixels artery where
    p_artery >= p_vein, vein otherwise (ties go to artery).

    Parameters
    ----------

    tri : TriProbMap

    threshold : float in (0, 1), default=0.5

    mode : str, 'detected' or 'gt_pixels'

    Returns
    -------

    decision : AVDecision

    Examples
    --------

    A pixel with p_vessel 0.49 is background at threshold 0.5 in detected
    mode, whatever its artery and vein probabilities.
    """

    if not 0 < threshold < 1:
        raise ValueError('threshold must be in (0, 1), got {}'.format(threshold))
    if mode not in AV_MODES:
        raise ValueError('mode must be one of {}, got {!r}'.format(AV_MODES, mode))

    vessel = np.asarray(tri.vessel) >= threshold
    artery = np.asarray(tri.artery) >= np.asarray(tri.vein)
    vein = ~artery
    if mode == 'detected':
        artery &= vessel
        vein &= vessel
    return AVDecision(vessel, artery, vein, mode)


# bit k of a neighbourhood code is the k-th neighbour clockwise from north
_NEIGHBOUR_BITS = np.array([[128, 1, 2],
                            [64, 0, 4],
                            [32, 16, 8]], dtype=np.intp)


def _thinning_tables():
    """removable[code] for the two Zhang-Suen sub-iterations"""

    first = np.zeros(256, dtype=bool)
    second = np.zeros(256, dtype=bool)
    for code in range(256):
        p = [(code >> k) & 1 for k in range(8)]
        n, e, s, w = p[0], p[2], p[4], p[6]
        count = sum(p)
        crossings = sum(1 for k in range(8) if p[k] == 0 and p[(k + 1) % 8] == 1)
        if not (2 <= count <= 6 and crossings == 1):
            continue
        first[code] = n * e * s == 0 and e * s * w == 0
        second[code] = n * e * w == 0 and n * s * w == 0
    return first, second


_THINNING_TABLES = _thinning_tables()


def skeletonize(mask):
    """
    One pixel wide, 8-connected centerlines of a binary mask by
    Zhang-Suen thinning. The skeleton is a subset of the mask, and every
    8-connected component of the mask keeps at least one pixel: a
    component that thins away completely (a 2x2 block does) is
    represented by its pixel farthest from the background.

    Examples
    --------

    >>> bar = np.zeros((7, 13), dtype=bool)
    >>> bar[2:5, 2:11] = True
    >>> np.nonzero(skeletonize(bar))[1].tolist()
    [3, 4, 5, 6, 7, 8]
    """

    mask = np.asarray(mask, dtype=bool)
    skeleton = mask.copy()
    changed = skeleton.any()
    while changed:
        changed = False
        for removable in _THINNING_TABLES:
            code = ndimage.correlate(skeleton.astype(np.intp), _NEIGHBOUR_BITS,
                                     mode='constant', cval=0)
            drop = skeleton & removable[code]
            if drop.any():
                skeleton &= ~drop
                changed = True

    labels, n = ndimage.label(mask, structure=np.ones((3, 3), dtype=bool))
    lost = np.setdiff1d(np.arange(1, n + 1), labels[skeleton])
    if lost.size:
        depth = ndimage.distance_transform_edt(mask)
        for pos in ndimage.maximum_position(depth, labels, lost):
            skeleton[pos] = True
    return skeleton
