# -*- coding: utf-8 -*-
"""VesselPy library.

Stochastic gradient descent with momentum and the step learning rate
schedule.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from collections import OrderedDict

import numpy as np

from vesselpy.common.helpers import pretty_str


class OptimState(object):
    """
    Momentum velocities, one per parameter, and the number of steps taken.
    """

    def __init__(self, velocities, iteration=0):
        self.velocities = OrderedDict(velocities)
        self.iteration = int(iteration)

    @classmethod
    def zeros(cls, params):
        """zero velocities mirroring `params`"""
        return cls(((name, np.zeros_like(t.data)) for name, t in params.items()))

    def __repr__(self):
        return '\n'.join([
            'OptimState object',
            pretty_str('iteration', self.iteration),
            pretty_str('velocities', len(self.velocities)),
        ])


def lr_at(iteration, cfg):
    """
    Learning rate lr0 * 2^-(iteration // period).

    Parameters
    ----------

    iteration : int, >= 0

    cfg : TrainConfig or any object with `lr` and `lr_period`
    """

    if iteration < 0:
        raise ValueError('iteration must be non-negative')
    return cfg.lr * 0.5 ** (iteration // cfg.lr_period)


def sgd_step(params, state, lr, momentum=0.9, lam=0.):
    """
    One momentum step on every parameter, in place::

        g' = g + lam * theta      (conv weights only)
        v  = momentum * v + g'
        theta = theta - lr * v

    Parameters without a gradient use g = 0. Gradients are zeroed
    afterwards. Parameter arrays are replaced, not written into, so graphs
    built before the step keep their values.

    Parameters
    ----------

    params : ParameterSet

    state : OptimState

    lr, momentum : float

    lam : float, default=0
        weight decay folded into the gradient; pass 0 when the decay is
        part of the loss
    """

    for name, t in params.items():
        g = np.zeros_like(t.data) if t.grad is None else t.grad
        if lam and params.kind(name) == 'conv_weight':
            g = g + lam * t.data
        v = momentum * state.velocities[name] + g
        state.velocities[name] = v.astype(t.dtype, copy=False)
        t.data = (t.data - lr * v).astype(t.dtype, copy=False)
        t.grad = None
    state.iteration += 1
