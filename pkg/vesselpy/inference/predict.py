# -*- coding: utf-8 -*-
# pylint: disable=too-many-arguments

"""VesselPy library.

Full-image prediction: preprocess, run the network on ordered tiles in
eval mode, and average the overlapping tile outputs.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass
import logging
from typing import Optional

import numpy as np

from vesselpy.common.helpers import ordered_map, pretty_str
from vesselpy.inference.tiling import stitch, tile_positions
from vesselpy.network.activation import normalized_activation
from vesselpy.network.model import forward
from vesselpy.preprocess.pipeline import PreprocessConfig, preprocess_cached
from vesselpy.training.checkpoint import check_config_hash

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InferenceConfig(object):
    """
    stride : int, default=10
        tile step in pixels, at most the network patch size

    threshold : float, default=0.5
        vessel probability threshold, in (0, 1)

    batch_size : int, default=32
        tiles per forward pass
    """

    stride: int = 10
    threshold: float = 0.5
    batch_size: int = 32

    def __post_init__(self):
        if self.stride < 1 or self.batch_size < 1:
            raise ValueError('stride and batch_size must be 1 or greater')
        if not 0 < self.threshold < 1:
            raise ValueError('threshold must be in (0, 1), got {}'.format(self.threshold))


@dataclass
class TriProbMap(object):
    """
    Stitched per-pixel probabilities of one image.

    vessel, artery, vein : (H, W) in [0, 1]
    coverage : (H, W) tiles per pixel, >= 1
    activation : (H, W) spatial activation rescaled to [0, 1], or None
    """

    vessel: np.ndarray
    artery: np.ndarray
    vein: np.ndarray
    coverage: np.ndarray
    activation: Optional[np.ndarray] = None
    name: str = ''

    @property
    def shape(self):
        return self.vessel.shape

    def __repr__(self):
        return '\n'.join([
            'TriProbMap object',
            pretty_str('name', self.name),
            pretty_str('shape', self.shape),
            pretty_str('coverage', (int(self.coverage.min()), int(self.coverage.max()))),
        ])


def network_predictor(params, net_cfg):
    """
    Tile prediction function of a trained network.

    Returns
    -------

    fn : callable
        fn(x (B, C, P, P)) -> (B, 4, P, P) array of vessel, artery, vein
        and raw activation. Without a vessel branch the vessel
        probability is max(artery, vein).
    """

    def fn(x):
        out = forward(x, params, net_cfg, 'eval')
        av = out.av_map.data
        if out.vessel_map is None:
            vessel = np.maximum(av[:, :1], av[:, 1:])
        else:
            vessel = out.vessel_map.data
        return np.concatenate([vessel, av, out.activation_map.data], axis=1)
    return fn


def predict_stack(channels, predict_fn, patch=64, stride=10, batch_size=32, threads=1):
    """
    Tile, predict and stitch one preprocessed stack.

    Parameters
    ----------

    channels : ndarray (C, H, W)

    predict_fn : callable
        (B, C, P, P) -> (B, K, P, P)

    patch, stride, batch_size : int

    threads : int
        tile batches run on this many threads; results are identical for
        any value

    Returns
    -------

    mean : ndarray (K, H, W)

    coverage : ndarray (H, W)
    """

    _, H, W = channels.shape
    grid = tile_positions(H, W, patch, stride)
    positions = grid.positions
    batches = [positions[i:i + batch_size] for i in range(0, len(positions), batch_size)]

    def run(batch):
        x = np.stack([channels[:, t:t + patch, l:l + patch] for t, l in batch])
        return predict_fn(x)

    tiles = np.concatenate(ordered_map(run, batches, threads))
    logger.debug('predicted %d tiles on a %dx%d image', len(positions), H, W)
    return stitch(positions, tiles, (H, W))


def predict_full(img, ckpt, net_cfg, pre_cfg=PreprocessConfig(), inf_cfg=InferenceConfig(),
                 threads=1, predict_fn=None, root=None):
    """
    Vessel, artery and vein probabilities of a whole image.

    Parameters
    ----------

    img : FundusImage

    ckpt : Checkpoint
        trained parameters; must match `net_cfg`

    net_cfg : NetworkConfig

    pre_cfg : PreprocessConfig

    inf_cfg : InferenceConfig

    threads : int

    predict_fn : callable, optional
        replaces the network, see `network_predictor`

    root : str, optional
        dataset root whose channel cache is read when `pre_cfg.use_cache`
        is set

    Returns
    -------

    tri : TriProbMap

    Raises
    ------

    ConfigHashMismatch
        the checkpoint was trained with another architecture
    """

    check_config_hash(ckpt, net_cfg)
    if predict_fn is None:
        predict_fn = network_predictor(ckpt.params, net_cfg)

    stack = preprocess_cached(img, pre_cfg, root)
    channels = stack.channels.astype(ckpt.params.dtype)
    mean, coverage = predict_stack(channels, predict_fn, net_cfg.patch_size, inf_cfg.stride,
                                   inf_cfg.batch_size, threads)

    activation = None
    if mean.shape[0] > 3:
        sigma = net_cfg.sigma if net_cfg.multitask and net_cfg.activation else 0.
        activation = normalized_activation(mean[3], sigma)
    logger.info('predicted %s', img.name or 'image')
    return TriProbMap(np.clip(mean[0], 0., 1.), np.clip(mean[1], 0., 1.),
                      np.clip(mean[2], 0., 1.), coverage, activation, img.name or '')
