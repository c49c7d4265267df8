# -*- coding: utf-8 -*-
"""VesselPy library.

End-to-end finite difference check of the training loss gradient with
respect to every network parameter.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import numpy as np
from numpy.random import default_rng

from vesselpy.autodiff.gradcheck import sampled_grad_check
from vesselpy.network.config import NetworkConfig
from vesselpy.network.model import build_network, forward
from vesselpy.training.config import LossWeights
from vesselpy.training.loss import total_loss


def random_labels(n, size, rng):
    """(n, 4, size, size) labels with consistent vessel/artery/vein/uncertain flags"""

    vessel = rng.random((n, size, size)) < 0.3
    artery = vessel & (rng.random((n, size, size)) < 0.5)
    vein = vessel & ~artery
    uncertain = vessel & (rng.random((n, size, size)) < 0.1)
    artery &= ~uncertain
    vein &= ~uncertain
    return np.stack([vessel, artery, vein, uncertain], axis=1).astype(np.float64)


def network_grad_check(seed=0, net_cfg=None, batch=2, per_tensor=2, eps=1e-5,
                       weights=LossWeights()):
    """
    Compare backward-pass and central difference gradients of the total
    training loss in 64-bit.

    Parameters
    ----------

    seed : int
        seeds the parameters, inputs and labels

    net_cfg : NetworkConfig, optional
        default width 4 on 16x16 patches

    batch : int
        patches per batch

    per_tensor : int
        coordinates sampled from each parameter tensor

    Returns
    -------

    errors : OrderedDict of parameter name -> max relative error
    """

    if net_cfg is None:
        net_cfg = NetworkConfig(width=4, patch_size=16)
    params = build_network(net_cfg, seed, np.float64)
    rng = default_rng([seed, 2])
    x = rng.standard_normal((batch, net_cfg.in_channels, net_cfg.patch_size, net_cfg.patch_size))
    labels = random_labels(batch, net_cfg.patch_size, rng)

    def loss():
        return total_loss(forward(x, params, net_cfg, 'train'), labels, weights, params)

    tensors = {name: params[name] for name in params}
    return sampled_grad_check(loss, tensors, eps, per_tensor, seed, refinements=2)
