# -*- coding: utf-8 -*-
"""VesselPy library.

Ordered tiles over an image and overlap averaging of per-tile
predictions.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import numpy as np

from vesselpy.common.errors import ShapeError
from vesselpy.common.helpers import pretty_str


def axis_positions(size, patch, stride):
    """0, stride, 2 stride, ... plus a final position flush with the border"""
    pos = list(range(0, size - patch + 1, stride))
    if pos[-1] != size - patch:
        pos.append(size - patch)
    return pos


class TileGrid(object):
    """
    Top-left tile positions in row-major order.

    Attributes
    ----------

    rows, cols : list of int
        positions along each axis

    positions : list of (top, left)
    """

    def __init__(self, height, width, patch, stride, rows, cols):
        self.height = height
        self.width = width
        self.patch = patch
        self.stride = stride
        self.rows = rows
        self.cols = cols
        self.positions = [(r, c) for r in rows for c in cols]

    def __len__(self):
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)

    def coverage(self):
        """number of tiles covering each pixel"""
        counts = np.zeros((self.height, self.width), dtype=np.int64)
        for top, left in self.positions:
            counts[top:top + self.patch, left:left + self.patch] += 1
        return counts

    def __repr__(self):
        return '\n'.join([
            'TileGrid object',
            pretty_str('shape', (self.height, self.width)),
            pretty_str('patch', self.patch),
            pretty_str('stride', self.stride),
            pretty_str('tiles', (len(self.rows), len(self.cols))),
        ])


def tile_positions(height, width, patch=64, stride=10):
    """
    Tile grid covering an image.

    Parameters
    ----------

    height, width : int
        image size, both at least `patch`

    patch : int, default=64

    stride : int, default=10
        step between tiles, from 1 to `patch`; a longer step would skip
        pixels

    Returns
    -------

    grid : TileGrid

    Raises
    ------

    ShapeError
        image smaller than the patch

    ValueError
        stride outside 1..patch

    Examples
    --------

    >>> grid = tile_positions(584, 565)
    >>> len(grid.rows), len(grid.cols), grid.cols[-1]
    (53, 52, 501)
    """

    if stride < 1 or patch < 1:
        raise ValueError('patch and stride must be 1 or greater')
    if stride > patch:
        raise ValueError('stride {} is longer than the {} patch, pixels would be skipped'
                         .format(stride, patch))
    if height < patch or width < patch:
        raise ShapeError('image {}x{} is smaller than the {} patch'.format(height, width, patch))
    return TileGrid(height, width, patch, stride,
                    axis_positions(height, patch, stride), axis_positions(width, patch, stride))


def stitch(positions, tiles, shape):
    """
    Average overlapping tile predictions.

    Tiles are accumulated in sorted (top, left) order in float64, so the
    result does not depend on the order they are passed in.

    Parameters
    ----------

    positions : sequence of (top, left)

    tiles : ndarray (T, C, P, P) or sequence of (C, P, P)

    shape : (H, W)

    Returns
    -------

    mean : ndarray (C, H, W)

    coverage : ndarray (H, W) of int

    Raises
    ------

    ShapeError
        some pixel is covered by no tile
    """

    positions = [tuple(int(v) for v in p) for p in positions]
    if len(positions) != len(tiles) or not positions:
        raise ValueError('need one tile per position')
    C, P = tiles[0].shape[0], tiles[0].shape[-1]
    H, W = shape
    total = np.zeros((C, H, W), dtype=np.float64)
    coverage = np.zeros((H, W), dtype=np.int64)
    for k in sorted(range(len(positions)), key=lambda i: positions[i]):
        top, left = positions[k]
        total[:, top:top + P, left:left + P] += tiles[k]
        coverage[top:top + P, left:left + P] += 1
    if coverage.min() < 1:
        raise ShapeError('tiles leave pixels uncovered')
    return total / coverage, coverage
