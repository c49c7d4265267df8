# -*- coding: utf-8 -*-
"""VesselPy library.

Training images held in memory as preprocessed stacks, and uniform random
patch sampling from them.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass
import logging
from typing import List

import numpy as np

from vesselpy.common.errors import ShapeError
from vesselpy.common.helpers import ordered_map, pretty_str
from vesselpy.io.dataset import load_entry
from vesselpy.preprocess.pipeline import PreprocessConfig, preprocess_cached

logger = logging.getLogger(__name__)


class TrainingSet(object):
    """
    Preprocessed training images.

    Parameters
    ----------

    stacks : list of ndarray (C, H, W)
        standardized input stacks

    labels : list of ndarray (4, H, W)
        vessel, artery, vein, uncertain flags

    names : list of str, optional
    """

    def __init__(self, stacks, labels, names=None):
        if not stacks:
            raise ValueError('training set is empty')
        if len(stacks) != len(labels):
            raise ValueError('{} stacks but {} labels'.format(len(stacks), len(labels)))
        for s, y in zip(stacks, labels):
            if s.ndim != 3 or y.shape != (4,) + s.shape[1:]:
                raise ShapeError('stack {} and label {} do not match'.format(s.shape, y.shape))
        self.stacks = list(stacks)
        self.labels = list(labels)
        self.names = list(names) if names is not None else [str(i) for i in range(len(stacks))]

    def __len__(self):
        return len(self.stacks)

    def min_size(self):
        return min(min(s.shape[1:]) for s in self.stacks)

    def __repr__(self):
        return '\n'.join([
            'TrainingSet object',
            pretty_str('images', len(self)),
            pretty_str('shapes', [s.shape for s in self.stacks]),
        ])


def build_training_set(index, pre_cfg=PreprocessConfig(), strict=True, threads=1):
    """
    Load and preprocess every entry of a DatasetIndex.

    Images are processed on `threads` worker threads; the result is in
    index order regardless.
    """

    def one(entry):
        img, tri = load_entry(entry, strict)
        stack = preprocess_cached(img, pre_cfg, index.root)
        logger.debug('training image %s ready', entry.name)
        return stack.channels, tri.as_channels(np.float32)

    pairs = ordered_map(one, index.entries, threads)
    return TrainingSet([p[0] for p in pairs], [p[1] for p in pairs], index.names)


@dataclass
class PatchBatch(object):
    """
    x : (B, C, P, P) input patches
    y : (B, 4, P, P) label patches
    index : (B, 3) int array of (image, top, left) per patch
    """

    x: np.ndarray
    y: np.ndarray
    index: np.ndarray


def sample_patch_batch(ts, batch_size, patch_size, rng, dtype=np.float32):
    """
    Draw a batch of patches uniformly at random.

    For each patch the image index, then the top and then the left offset
    are drawn from `rng`, each uniform over its valid range, so a given
    generator state always yields the same batch.

    Parameters
    ----------

    ts : TrainingSet

    batch_size, patch_size : int

    rng : numpy.random.Generator

    Returns
    -------

    batch : PatchBatch

    Raises
    ------

    ShapeError
        an image is smaller than the patch size
    """

    if ts.min_size() < patch_size:
        raise ShapeError('images must be at least {0}x{0}, smallest side is {1}'.format(
            patch_size, ts.min_size()))

    C = ts.stacks[0].shape[0]
    x = np.empty((batch_size, C, patch_size, patch_size), dtype=dtype)
    y = np.empty((batch_size, 4, patch_size, patch_size), dtype=dtype)
    index = np.empty((batch_size, 3), dtype=np.int64)
    for b in range(batch_size):
        i = int(rng.integers(len(ts)))
        _, H, W = ts.stacks[i].shape
        top = int(rng.integers(H - patch_size + 1))
        left = int(rng.integers(W - patch_size + 1))
        x[b] = ts.stacks[i][:, top:top + patch_size, left:left + patch_size]
        y[b] = ts.labels[i][:, top:top + patch_size, left:left + patch_size]
        index[b] = (i, top, left)
    return PatchBatch(x, y, index)
