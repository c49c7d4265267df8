# -*- coding: utf-8 -*-
"""VesselPy library.

Loss weights and training schedule parameters.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass

import numpy as np

from vesselpy.common.helpers import float_dtype


@dataclass(frozen=True)
class LossWeights(object):
    """
    Class weights of the weighted cross entropy and the weight decay
    coefficient.

    Parameters
    ----------

    mu_vessel, mu_artery, mu_vein : float
        positive, summing to 1. Defaults 3/7, 2/7, 2/7.

    lam : float, default=5e-4
        weight decay coefficient, >= 0
    """

    mu_vessel: float = 3. / 7.
    mu_artery: float = 2. / 7.
    mu_vein: float = 2. / 7.
    lam: float = 5e-4

    def __post_init__(self):
        if min(self.mu_vessel, self.mu_artery, self.mu_vein) <= 0:
            raise ValueError('class weights must be positive')
        if abs(self.mu_vessel + self.mu_artery + self.mu_vein - 1.) > 1e-9:
            raise ValueError('class weights must sum to 1, got {}'.format(
                self.mu_vessel + self.mu_artery + self.mu_vein))
        if not self.lam >= 0:
            raise ValueError('lam must be non-negative, got {}'.format(self.lam))

    @property
    def mu(self):
        """(vessel, artery, vein) weights as an array"""
        return np.array([self.mu_vessel, self.mu_artery, self.mu_vein])


@dataclass(frozen=True)
class TrainConfig(object):
    """
    Training schedule.

    Defaults are the desk scale schedule: 2000 iterations with the
    learning rate halved every 500. 60000 and 7500 reproduce the full
    length schedule.

    Parameters
    ----------

    decay_mode : str, 'loss' or 'optimizer'
        weight decay as the explicit (lam / 2) |theta|^2 loss term, or
        folded into the gradients by `sgd_step`. Exactly one is applied.

    two_sided : bool, default=True
        full binary cross entropy; False keeps only the -t log p term

    precision : str, 'float32' or 'float64'

    checkpoint_every : int
        periodic checkpoint interval, 0 for the final checkpoint only
    """

    patch_size: int = 64
    batch_size: int = 16
    max_iter: int = 2000
    lr: float = 0.05
    lr_period: int = 500
    momentum: float = 0.9
    seed: int = 0
    precision: str = 'float32'
    log_every: int = 10
    checkpoint_every: int = 500
    decay_mode: str = 'loss'
    two_sided: bool = True

    def __post_init__(self):
        for name in ('patch_size', 'batch_size', 'lr_period', 'log_every'):
            if getattr(self, name) < 1:
                raise ValueError('{} must be 1 or greater'.format(name))
        if self.max_iter < 0 or self.checkpoint_every < 0:
            raise ValueError('max_iter and checkpoint_every must be non-negative')
        if not self.lr > 0:
            raise ValueError('lr must be positive')
        if not 0 <= self.momentum < 1:
            raise ValueError('momentum must be in [0, 1)')
        if self.decay_mode not in ('loss', 'optimizer'):
            raise ValueError("decay_mode must be 'loss' or 'optimizer', got {!r}".format(
                self.decay_mode))
        float_dtype(self.precision)

    @property
    def dtype(self):
        return float_dtype(self.precision)
