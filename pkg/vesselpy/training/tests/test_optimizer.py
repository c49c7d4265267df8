# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import numpy as np
import pytest

from vesselpy.autodiff import ParameterSet
from vesselpy.training import OptimState, TrainConfig, lr_at, sgd_step


def _single(theta=1.):
    params = ParameterSet()
    params.add('w', np.array([theta]))
    return params, OptimState.zeros(params)


def test_schedule():
    cfg = TrainConfig(lr=0.05, lr_period=7500)
    assert lr_at(0, cfg) == 0.05
    assert lr_at(7499, cfg) == 0.05
    assert lr_at(7500, cfg) == 0.025
    assert lr_at(15000, cfg) == 0.0125
    assert lr_at(500, TrainConfig()) == 0.025
    with pytest.raises(ValueError):
        lr_at(-1, cfg)


def test_momentum_steps():
    params, state = _single()
    w = params['w']
    w.grad = np.array([0.5])
    sgd_step(params, state, 0.1, 0.9, 0.)
    assert abs(w.data[0] - 0.95) < 1e-15
    assert abs(state.velocities['w'][0] - 0.5) < 1e-15
    assert w.grad is None

    w.grad = np.array([0.5])
    sgd_step(params, state, 0.1, 0.9, 0.)
    assert abs(state.velocities['w'][0] - 0.95) < 1e-15
    assert abs(w.data[0] - 0.855) < 1e-15
    assert state.iteration == 2


def test_plain_descent():
    params, state = _single(0.3)
    w = params['w']
    for g in (0.7, -0.2, 1.3):
        expected = w.data[0] - 0.01 * g
        w.grad = np.array([g])
        sgd_step(params, state, 0.01, 0., 0.)
        assert w.data[0] == expected


def test_missing_gradient():
    params, state = _single(2.)
    sgd_step(params, state, 0.1, 0.9, 0.)
    assert params['w'].data[0] == 2.


def test_decay_only_on_conv_weights():
    params = ParameterSet()
    params.add('conv.weight', np.array([1.]))
    params.add('bn.gamma', np.array([1.]), 'bn_gamma')
    state = OptimState.zeros(params)
    sgd_step(params, state, 0.1, 0., 0.5)
    assert abs(params['conv.weight'].data[0] - 0.95) < 1e-15
    assert params['bn.gamma'].data[0] == 1.


def test_step_does_not_touch_old_arrays():
    params, state = _single()
    old = params['w'].data
    params['w'].grad = np.array([1.])
    sgd_step(params, state, 0.1, 0.9, 0.)
    assert old[0] == 1.


def test_float32_preserved():
    params = ParameterSet()
    params.add('w', np.ones(3, dtype=np.float32))
    state = OptimState.zeros(params)
    params['w'].grad = np.full(3, 0.5, dtype=np.float32)
    sgd_step(params, state, 0.05, 0.9, 5e-4)
    assert params['w'].dtype == np.float32
    assert state.velocities['w'].dtype == np.float32


def test_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(batch_size=0)
    with pytest.raises(ValueError):
        TrainConfig(decay_mode='both')
    with pytest.raises(ValueError):
        TrainConfig(precision='float16')
    with pytest.raises(ValueError):
        TrainConfig(momentum=1.)
