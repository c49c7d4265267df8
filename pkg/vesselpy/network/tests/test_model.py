# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import numpy as np
from numpy.random import default_rng
import pytest

from vesselpy.autodiff import Tensor, tensor_sum, mul, add, sampled_grad_check
from vesselpy.common.errors import ShapeError
from vesselpy.network import (NetworkConfig, build_network, forward, count_parameters,
                              layer_table, activation_max, ablation_configs,
                              ABLATION_LABELS)


def _expected_count(W=16, cin=8):
    """parameter count of the default layout, layer by layer"""
    n = cin * 4 * W * 9 + 4 * W          # expand
    n += 4 * W * 3 + 3                   # compress
    n += 3 * W * 9 + 2 * W               # stem conv, bn
    fin = W
    for s in range(4):
        w = W * 2 ** s
        n += fin * w * 9 + 2 * w + w * w * 9 + 2 * w
        if s > 0:
            n += fin * w + 2 * w         # projection shortcut
        n += 2 * (w * w * 9 + 2 * w)
        fin = w
    n += (W + 2 * W + 4 * W) * 3 + 3 * 3  # side heads
    for deep, skip in ((8 * W, 4 * W), (4 * W, 2 * W), (2 * W, W)):
        n += (deep + skip) * skip * 9 + 2 * skip + skip * skip * 9 + 2 * skip
    n += 2 * (W * W * 9 + W)             # branch_v, branch_a
    n += W + 1                           # vessel head
    n += 2 * W * 2 + 2                   # av head
    return n


def test_parameter_count():
    cfg = NetworkConfig()
    params = build_network(cfg, seed=0)
    assert params.count() == _expected_count()
    assert count_parameters(cfg) == params.count()


def test_deterministic():
    a = build_network(NetworkConfig(width=4, patch_size=16), seed=3)
    b = build_network(NetworkConfig(width=4, patch_size=16), seed=3)
    assert list(a) == list(b)
    for name in a:
        assert np.array_equal(a[name].data, b[name].data)
    c = build_network(NetworkConfig(width=4, patch_size=16), seed=4)
    assert not np.array_equal(a['expand.weight'].data, c['expand.weight'].data)


def test_he_normal():
    cfg = NetworkConfig()
    params = build_network(cfg, seed=0)
    checked = 0
    for name, shape, kind, head in layer_table(cfg):
        if kind != 'conv_weight' or head or np.prod(shape) < 512:
            continue
        expected = np.sqrt(2. / (shape[1] * shape[2] * shape[3]))
        assert abs(params[name].data.std() / expected - 1.) < 0.1, name
        checked += 1
    assert checked > 20


def test_initial_state():
    params = build_network(NetworkConfig(width=4, patch_size=16), seed=0)
    assert np.all(params['stem.bn.gamma'].data == 1.)
    assert np.all(params['stem.bn.beta'].data == 0.)
    assert np.all(params['expand.bias'].data == 0.)
    assert np.all(params.buffers['stem.bn'].running_var == 1.)
    assert params.dtype == np.float32


def test_output_shapes():
    cfg = NetworkConfig()
    params = build_network(cfg, seed=0)
    x = default_rng(0).standard_normal((2, 8, 64, 64)).astype(np.float32)
    out = forward(x, params, cfg, 'train')
    assert out.vessel_map.shape == (2, 1, 64, 64)
    assert out.av_map.shape == (2, 2, 64, 64)
    assert len(out.side_maps) == 3
    for s in out.side_maps:
        assert s.shape == (2, 3, 64, 64)
    assert out.activation_map.shape == (2, 1, 64, 64)

    for t in (out.vessel_map, out.av_map) + out.side_maps:
        assert t.data.min() > 0.
        assert t.data.max() < 1.
    m = out.activation_map.data
    assert m.min() >= 1.
    assert m.max() <= 1.221200


def test_wrong_shapes():
    cfg = NetworkConfig(width=4, patch_size=16)
    params = build_network(cfg, seed=0)
    with pytest.raises(ShapeError):
        forward(np.zeros((1, 8, 32, 32)), params, cfg)
    with pytest.raises(ShapeError):
        forward(np.zeros((1, 5, 16, 16)), params, cfg)
    with pytest.raises(ValueError):
        NetworkConfig(patch_size=60)
    with pytest.raises(ValueError):
        NetworkConfig(side_outputs=2)
    with pytest.raises(ValueError):
        NetworkConfig(sigma=-1.)


def test_eval_batch_independent():
    cfg = NetworkConfig(width=4, patch_size=16)
    params = build_network(cfg, seed=1)
    x = default_rng(2).standard_normal((3, 8, 16, 16)).astype(np.float32)
    # move the running statistics away from their initial values
    forward(x, params, cfg, 'train')

    batched = forward(x, params, cfg, 'eval')
    again = forward(x.copy(), params, cfg, 'eval')
    assert np.array_equal(batched.av_map.data, again.av_map.data)
    for n in range(3):
        single = forward(x[n:n + 1], params, cfg, 'eval')
        assert np.array_equal(single.av_map.data[0], batched.av_map.data[n])
        assert np.array_equal(single.vessel_map.data[0], batched.vessel_map.data[n])


def test_zero_sigma_is_no_activation():
    x = default_rng(5).standard_normal((2, 8, 16, 16))
    flat = NetworkConfig(width=4, patch_size=16, sigma=0.)
    off = NetworkConfig(width=4, patch_size=16, activation=False)
    a = forward(x, build_network(flat, 7, np.float64), flat, 'eval')
    b = forward(x, build_network(off, 7, np.float64), off, 'eval')
    assert np.all(a.activation_map.data == 1.)
    assert np.array_equal(a.av_map.data, b.av_map.data)


def test_ablation_variants():
    x = default_rng(6).standard_normal((1, 8, 16, 16))
    base = NetworkConfig(width=4, patch_size=16, multitask=False)
    out = forward(x, build_network(base, 0), base, 'eval')
    assert out.vessel_map is None
    assert out.av_map.shape == (1, 2, 16, 16)

    rgb = NetworkConfig(width=4, patch_size=16, multi_input=False)
    params = build_network(rgb, 0)
    assert 'expand.weight' not in params
    assert rgb.input_channels == 3
    a = forward(x, params, rgb, 'eval')
    b = forward(x[:, :3], params, rgb, 'eval')
    assert np.array_equal(a.av_map.data, b.av_map.data)

    no_ds = NetworkConfig(width=4, patch_size=16, deep_supervision=False)
    assert forward(x, build_network(no_ds, 0), no_ds, 'eval').side_maps == ()
    assert count_parameters(no_ds) < count_parameters(NetworkConfig(width=4, patch_size=16))


def test_config_hash():
    a = NetworkConfig().config_hash()
    assert a == NetworkConfig().config_hash()
    assert a != NetworkConfig(sigma=0.5).config_hash()
    assert len(a) == 64


def test_end_to_end_gradients():
    cfg = NetworkConfig(width=4, patch_size=16)
    params = build_network(cfg, seed=0, dtype=np.float64)
    rng = default_rng(8)
    x = rng.standard_normal((2, 8, 16, 16))
    r_v = Tensor(rng.uniform(0.5, 1.5, (2, 1, 16, 16)))
    r_av = Tensor(rng.uniform(0.5, 1.5, (2, 2, 16, 16)))
    r_s = Tensor(rng.uniform(0.5, 1.5, (2, 3, 16, 16)))

    def loss():
        out = forward(x, params, cfg, 'train')
        total = add(tensor_sum(mul(out.vessel_map, r_v)), tensor_sum(mul(out.av_map, r_av)))
        for s in out.side_maps:
            total = add(total, tensor_sum(mul(s, r_s)))
        return total

    tensors = {name: params[name] for name in params}
    errors = sampled_grad_check(loss, tensors, per_tensor=2, refinements=2)
    worst = max(errors, key=errors.get)
    assert errors[worst] < 1e-4, (worst, errors[worst])


def test_ablation_configs():
    cfgs = ablation_configs(NetworkConfig(width=4, patch_size=16))
    assert list(cfgs) == list(ABLATION_LABELS)
    base = cfgs['baseline']
    assert not (base.multitask or base.multi_input or base.activation or base.deep_supervision)
    full = cfgs['+MT+MI+AC']
    assert full == NetworkConfig(width=4, patch_size=16)
    assert len({c.config_hash() for c in cfgs.values()}) == 4
    counts = [count_parameters(c) for c in cfgs.values()]
    assert counts[0] < counts[1] < counts[2] == counts[3]
