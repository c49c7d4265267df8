# -*- coding: utf-8 -*-
# pylint: disable=invalid-name

"""VesselPy library.

Multi-task training loss: weighted binary cross entropy of the output
maps, the mean of the side output terms, and weight decay::

    L = BCE(output, GT) + 1/k sum_i BCE(side_i, GT) + lam / 2 |theta|^2

Labels are (N, 4, H, W) arrays with channels vessel, artery, vein,
uncertain. Uncertain pixels count for the vessel channel only.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import warnings

import numpy as np

from vesselpy.autodiff import ops
from vesselpy.autodiff.tensor import Tensor
from vesselpy.common.errors import ShapeError
from vesselpy.training.config import LossWeights

#: probabilities are clipped to [CLIP, 1 - CLIP] before taking logs
CLIP = 1e-7


def weighted_bce(pred, target, valid, mu, two_sided=True):
    """
    Class weighted binary cross entropy, normalized by the total weight of
    the valid pixel-channel pairs.

    Parameters
    ----------

    pred : Tensor (N, C, H, W)
        probabilities

    target : array_like (N, C, H, W)
        0/1 flags

    valid : array_like (N, C, H, W)
        0/1 masks of the pairs that contribute

    mu : array_like (C,) or LossWeights
        per channel weights

    two_sided : bool, default=True
        -mu [t log p + (1 - t) log(1 - p)]; False keeps only -mu t log p

    Returns
    -------

    loss : scalar Tensor
        0 (with a RuntimeWarning) when nothing is valid

    Examples
    --------

    >>> p = Tensor(np.array([0.9, 0.8, 0.1]).reshape(1, 3, 1, 1))
    >>> t = np.array([1., 1., 0.]).reshape(1, 3, 1, 1)
    >>> round(weighted_bce(p, t, np.ones_like(t), LossWeights()).item(), 6)
    0.139013
    """

    if isinstance(mu, LossWeights):
        mu = mu.mu
    mu = np.asarray(mu, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    valid = np.asarray(valid, dtype=np.float64)
    if target.shape != pred.shape or valid.shape != pred.shape:
        raise ShapeError('pred {}, target {} and valid {} must agree'.format(
            pred.shape, target.shape, valid.shape))
    if mu.shape != (pred.shape[1],):
        raise ShapeError('need one weight per channel, got {} for {} channels'.format(
            mu.shape, pred.shape[1]))

    weight = mu[None, :, None, None] * valid
    denom = weight.sum()
    if denom <= 0:
        warnings.warn('no valid pixels, cross entropy defined as 0', RuntimeWarning)
        shape, dtype = pred.shape, pred.dtype
        return Tensor(np.asarray(0., dtype=dtype), parents=(pred,), op='weighted_bce',
                      backward_fn=lambda g: (np.zeros(shape, dtype=dtype),))

    raw = pred.data.astype(np.float64)
    p = np.clip(raw, CLIP, 1. - CLIP)
    if two_sided:
        per_pixel = -(target * np.log(p) + (1. - target) * np.log(1. - p))
        dp = -(target / p - (1. - target) / (1. - p))
    else:
        per_pixel = -target * np.log(p)
        dp = -target / p
    dp = np.where((raw < CLIP) | (raw > 1. - CLIP), 0., dp)
    loss = (weight * per_pixel).sum() / denom

    def backward_fn(g):
        return ((g * weight * dp / denom).astype(pred.dtype),)

    return Tensor(np.asarray(loss, dtype=pred.dtype), parents=(pred,), op='weighted_bce',
                  backward_fn=backward_fn)


def split_labels(labels):
    """
    Targets and validity masks of an (N, 4, H, W) label batch.

    Returns
    -------

    target, valid : ndarray (N, 3, H, W)
        vessel, artery, vein; artery and vein are invalid at uncertain
        pixels
    """

    labels = np.asarray(labels)
    if labels.ndim != 4 or labels.shape[1] != 4:
        raise ShapeError('labels must be (N, 4, H, W), got {}'.format(labels.shape))
    target = labels[:, :3].astype(np.float64)
    valid = np.ones_like(target)
    certain = 1. - labels[:, 3].astype(np.float64)
    valid[:, 1] = certain
    valid[:, 2] = certain
    return target, valid


def decay_term(tensors, lam):
    """(lam / 2) times the sum of squares of `tensors`"""
    return ops.square_sum(tensors, lam / 2.)


def compose_loss(output, sides=(), decay=None):
    """
    output + mean(sides) + decay over precomputed scalar terms.

    Examples
    --------

    >>> a, b, c = (Tensor(np.array(v)) for v in (0.3, 0.6, 0.9))
    >>> round(compose_loss(Tensor(np.array(0.)), [a, b, c]).item(), 12)
    0.6
    """

    sides = list(sides)
    terms = [output] + sides
    coeffs = [1.] + ([1. / len(sides)] * len(sides) if sides else [])
    if decay is not None:
        terms.append(decay)
        coeffs.append(1.)
    return ops.weighted_sum(terms, coeffs)


def loss_terms(out, labels, w=LossWeights(), params=None, decay_mode='loss', two_sided=True):
    """
    The separate terms of the training loss.

    Parameters
    ----------

    out : NetworkOutputs

    labels : ndarray (N, 4, H, W)

    w : LossWeights

    params : ParameterSet, optional
        needed for the decay term

    decay_mode : str, 'loss' or 'optimizer'
        the decay term exists only in 'loss' mode with lam > 0

    Returns
    -------

    output : scalar Tensor

    sides : list of scalar Tensor

    decay : scalar Tensor or None
    """

    target, valid = split_labels(labels)
    if out.av_map.shape[0] != target.shape[0] or out.av_map.shape[2:] != target.shape[2:]:
        raise ShapeError('outputs {} and labels {} disagree'.format(out.av_map.shape, labels.shape))

    if out.vessel_map is not None:
        pred = ops.concat_channels(out.vessel_map, out.av_map)
        output = weighted_bce(pred, target, valid, w.mu, two_sided)
    else:
        output = weighted_bce(out.av_map, target[:, 1:], valid[:, 1:], w.mu[1:], two_sided)

    sides = [weighted_bce(s, target, valid, w.mu, two_sided) for s in out.side_maps]

    decay = None
    if decay_mode == 'loss' and w.lam > 0:
        if params is None:
            raise ValueError('the decay term needs the parameters')
        decay = decay_term(params.decayed(), w.lam)
    return output, sides, decay


def total_loss(out, labels, w=LossWeights(), params=None, decay_mode='loss', two_sided=True):
    """
    Training loss of one batch as a scalar Tensor; see `loss_terms`.
    """

    return compose_loss(*loss_terms(out, labels, w, params, decay_mode, two_sided))
