# -*- coding: utf-8 -*-
# pylint: disable=invalid-name, too-many-locals

"""VesselPy library.

Encoder-decoder network with deep supervision and a two-branch output
block.

Layout, for base width W and four stages::

    expand      3x3 conv  in -> 4W, relu
    compress    1x1 conv  4W -> 3
    stem        3x3 conv  3 -> W, bn, relu
    stage1..4   two residual blocks each, W, 2W, 4W, 8W channels;
                stages 2-4 enter with a stride 2 convolution
    side1..3    1x1 conv -> 3 channels after stages 1-3, upsampled to the
                patch size, sigmoid
    decode1..3  2x upsample, concat encoder skip, two (3x3 conv, bn, relu)
    branch_v    3x3 conv, relu -> f_v;  vessel: 1x1 conv, sigmoid -> x
    branch_a    3x3 conv, relu -> f_a
    av          1x1 conv over concat(f_v, f_a * m(x)), sigmoid -> (artery, vein)

Conv layers followed by batch normalization have no bias. Stride 2
convolutions pad one row and column at the top/left only, so their
sample centers sit on the even pixels kept by the shortcut's subsampling.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass
import logging
from typing import Optional, Tuple

import numpy as np
from numpy.random import default_rng

from vesselpy.autodiff import ops
from vesselpy.autodiff.tensor import Tensor, ParameterSet, BatchNormState
from vesselpy.common.errors import ShapeError
from vesselpy.common.helpers import pretty_str
from vesselpy.network.activation import spatial_activation
from vesselpy.network.config import NetworkConfig

logger = logging.getLogger(__name__)

#: initialization gain of the 1x1 output heads
HEAD_GAIN = 0.1

_STRIDE2_PAD = (1, 0)


@dataclass
class NetworkOutputs(object):
    """
    Outputs of one forward pass.

    vessel_map is None for the single-branch baseline. side_maps is empty
    without deep supervision. activation_map is all ones when the
    activation is off.
    """

    vessel_map: Optional[Tensor]
    av_map: Tensor
    side_maps: Tuple[Tensor, ...]
    activation_map: Tensor

    def __repr__(self):
        return '\n'.join([
            'NetworkOutputs object',
            pretty_str('vessel_map', None if self.vessel_map is None else self.vessel_map.shape),
            pretty_str('av_map', self.av_map.shape),
            pretty_str('side_maps', [s.shape for s in self.side_maps]),
            pretty_str('activation_map', self.activation_map.shape),
        ])


def _conv_entry(table, name, fout, fin, k, bias, head=False):
    table.append((name + '.weight', (fout, fin, k, k), 'conv_weight', head))
    if bias:
        table.append((name + '.bias', (fout,), 'conv_bias', False))


def _bn_entry(table, name, channels):
    table.append((name + '.gamma', (channels,), 'bn_gamma', False))
    table.append((name + '.beta', (channels,), 'bn_beta', False))


def _block_entries(table, name, fin, fout, stride):
    _conv_entry(table, name + '.conv1', fout, fin, 3, False)
    _bn_entry(table, name + '.bn1', fout)
    _conv_entry(table, name + '.conv2', fout, fout, 3, False)
    _bn_entry(table, name + '.bn2', fout)
    if stride != 1 or fin != fout:
        _conv_entry(table, name + '.shortcut', fout, fin, 1, False)
        _bn_entry(table, name + '.shortcut_bn', fout)


def layer_table(cfg):
    """
    Every trainable tensor of the network in creation order.

    Returns
    -------

    table : list of (name, shape, kind, is_head)
    """

    W = cfg.width
    widths = cfg.stage_widths()
    table = []

    if cfg.multi_input:
        _conv_entry(table, 'expand', 4 * W, cfg.in_channels, 3, True)
        _conv_entry(table, 'compress', 3, 4 * W, 1, True)
    _conv_entry(table, 'stem.conv', W, 3, 3, False)
    _bn_entry(table, 'stem.bn', W)

    fin = W
    for s, ws in enumerate(widths, start=1):
        stride = 1 if s == 1 else 2
        _block_entries(table, 'stage{}.block1'.format(s), fin, ws, stride)
        _block_entries(table, 'stage{}.block2'.format(s), ws, ws, 1)
        fin = ws

    if cfg.deep_supervision:
        for s in range(1, cfg.side_outputs + 1):
            _conv_entry(table, 'side{}'.format(s), 3, widths[s - 1], 1, True, head=True)

    deep = widths[-1]
    for d in range(1, cfg.stages):
        skip = widths[-1 - d]
        name = 'decode{}'.format(d)
        _conv_entry(table, name + '.conv1', skip, deep + skip, 3, False)
        _bn_entry(table, name + '.bn1', skip)
        _conv_entry(table, name + '.conv2', skip, skip, 3, False)
        _bn_entry(table, name + '.bn2', skip)
        deep = skip

    if cfg.multitask:
        _conv_entry(table, 'branch_v', W, W, 3, True)
        _conv_entry(table, 'vessel', 1, W, 1, True, head=True)
        _conv_entry(table, 'branch_a', W, W, 3, True)
        _conv_entry(table, 'av', 2, 2 * W, 1, True, head=True)
    else:
        _conv_entry(table, 'av', 2, W, 1, True, head=True)
    return table


def count_parameters(cfg):
    """number of trainable scalars of the network `cfg` describes"""
    return int(sum(np.prod(shape) for _, shape, _, _ in layer_table(cfg)))


def build_network(cfg=NetworkConfig(), seed=0, dtype=np.float32):
    """
    Create the parameters of a network.

    Conv weights are He-normal, N(0, 2 / fan_in), with the output heads
    scaled by HEAD_GAIN so initial probabilities sit near 0.5. Biases and
    batch normalization shifts start at 0, scales at 1, running statistics
    at mean 0 and variance 1.

    Parameters
    ----------

    cfg : NetworkConfig

    seed : int
        the same seed gives bitwise identical parameters

    dtype : numpy dtype, default float32
        float64 for gradient checks

    Returns
    -------

    params : ParameterSet
    """

    rng = default_rng(seed)
    params = ParameterSet()
    for name, shape, kind, head in layer_table(cfg):
        if kind == 'conv_weight':
            fan_in = shape[1] * shape[2] * shape[3]
            std = np.sqrt(2. / fan_in) * (HEAD_GAIN if head else 1.)
            data = rng.standard_normal(shape) * std
        elif kind == 'bn_gamma':
            data = np.ones(shape)
        else:
            data = np.zeros(shape)
        params.add(name, data.astype(dtype), kind)
        if kind == 'bn_gamma':
            params.add_buffer(name[:-len('.gamma')], BatchNormState(shape[0], dtype))

    logger.debug('built network: %d tensors, %d parameters', len(params), params.count())
    return params


def _conv(x, params, name, stride=1, pad=None):
    w = params[name + '.weight']
    bias = params[name + '.bias'] if name + '.bias' in params else None
    if pad is None:
        pad = w.shape[2] // 2
    return ops.conv2d(x, w, bias, stride, pad)


def _bn(x, params, name, mode):
    return ops.batchnorm2d(x, params[name + '.gamma'], params[name + '.beta'],
                           params.buffers[name], mode)


def _residual_block(x, params, name, stride, mode):
    pad = _STRIDE2_PAD if stride == 2 else 1
    h = ops.relu(_bn(_conv(x, params, name + '.conv1', stride, pad), params, name + '.bn1', mode))
    h = _bn(_conv(h, params, name + '.conv2'), params, name + '.bn2', mode)
    if name + '.shortcut.weight' in params:
        s = ops.subsample(x, 2) if stride == 2 else x
        s = _bn(_conv(s, params, name + '.shortcut', pad=0), params, name + '.shortcut_bn', mode)
    else:
        s = x
    return ops.relu(ops.add(h, s))


def _check_input(x, cfg):
    if x.ndim != 4:
        raise ShapeError('input must be (N, C, H, W), got {}'.format(x.shape))
    N, C, H, W = x.shape
    if (H, W) != (cfg.patch_size, cfg.patch_size):
        raise ShapeError('input patches are {}x{}, network expects {}x{}'.format(
            H, W, cfg.patch_size, cfg.patch_size))
    if C not in (cfg.in_channels, cfg.input_channels):
        raise ShapeError('input has {} channels, network expects {}'.format(C, cfg.in_channels))


def forward(x, params, cfg=NetworkConfig(), mode='train'):
    """
    Run the network on a batch of patches.

    Parameters
    ----------

    x : Tensor or ndarray (N, C, P, P)
        standardized input stack, P = cfg.patch_size. Without
        `cfg.multi_input` only the first three (RGB) channels are used.

    params : ParameterSet
        from `build_network` with the same cfg

    cfg : NetworkConfig

    mode : str, 'train' or 'eval'
        batch statistics (and running statistic updates) or running
        statistics

    Returns
    -------

    outputs : NetworkOutputs

    Raises
    ------

    ShapeError
        patch size or channel count does not match `cfg`
    """

    if not isinstance(x, Tensor):
        x = Tensor(np.asarray(x, dtype=params.dtype))
    _check_input(x, cfg)
    if x.shape[1] != cfg.input_channels:
        x = Tensor(np.ascontiguousarray(x.data[:, :cfg.input_channels]))

    h = x
    if cfg.multi_input:
        h = ops.relu(_conv(h, params, 'expand'))
        h = _conv(h, params, 'compress')
    h = ops.relu(_bn(_conv(h, params, 'stem.conv'), params, 'stem.bn', mode))

    skips = []
    for s in range(1, cfg.stages + 1):
        h = _residual_block(h, params, 'stage{}.block1'.format(s), 1 if s == 1 else 2, mode)
        h = _residual_block(h, params, 'stage{}.block2'.format(s), 1, mode)
        skips.append(h)

    side_maps = ()
    if cfg.deep_supervision:
        side_maps = tuple(
            ops.sigmoid(ops.upsample_nearest(_conv(skips[s - 1], params, 'side{}'.format(s)),
                                             2 ** (s - 1)))
            for s in range(1, cfg.side_outputs + 1))

    h = skips[-1]
    for d in range(1, cfg.stages):
        name = 'decode{}'.format(d)
        h = ops.concat_channels(ops.upsample_nearest2x(h), skips[-1 - d])
        h = ops.relu(_bn(_conv(h, params, name + '.conv1'), params, name + '.bn1', mode))
        h = ops.relu(_bn(_conv(h, params, name + '.conv2'), params, name + '.bn2', mode))

    N, P = x.shape[0], cfg.patch_size
    ones = Tensor(np.ones((N, 1, P, P), dtype=h.dtype))

    if not cfg.multitask:
        av = ops.sigmoid(_conv(h, params, 'av'))
        return NetworkOutputs(None, av, side_maps, ones)

    f_v = ops.relu(_conv(h, params, 'branch_v'))
    vessel = ops.sigmoid(_conv(f_v, params, 'vessel'))
    f_a = ops.relu(_conv(h, params, 'branch_a'))
    if cfg.activation:
        src = ops.detach(vessel) if cfg.detach_activation else vessel
        m = spatial_activation(src, cfg.sigma)
        f_a = ops.mul(f_a, m)
    else:
        m = ones
    av = ops.sigmoid(_conv(ops.concat_channels(f_v, f_a), params, 'av'))
    return NetworkOutputs(vessel, av, side_maps, m)
