# -*- coding: utf-8 -*-
# pylint: disable=invalid-name, too-many-arguments, too-many-locals

"""VesselPy library.

Differentiable operations on Tensors. Each function computes its forward
value with numpy and attaches the exact analytic backward.

Convolution is cross-correlation (no kernel flip), computed per sample
as an im2col matrix product so that per-sample results do not depend on
the batch they are computed in.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import numpy as np
from numpy.lib.stride_tricks import as_strided
from scipy.special import expit

from vesselpy.autodiff.tensor import Tensor
from vesselpy.common.errors import ShapeError


def as_tensor(x, like=None):
    """wrap arrays and scalars as constant tensors, in the dtype of `like`"""
    if isinstance(x, Tensor):
        return x
    dtype = like.dtype if like is not None else np.float64
    return Tensor(np.asarray(x, dtype=dtype))


def _pair(pad):
    if isinstance(pad, (tuple, list)):
        if len(pad) != 2 or min(pad) < 0:
            raise ValueError('pad must be an int or a (before, after) pair, got {}'.format(pad))
        return int(pad[0]), int(pad[1])
    if pad < 0:
        raise ValueError('pad must be non-negative, got {}'.format(pad))
    return int(pad), int(pad)


def _out_size(size, lo, hi, k, stride):
    span = size + lo + hi - k
    if span < 0 or span % stride:
        raise ShapeError('non-integral output size: ({} + {} + {} - {}) / {} + 1'.format(
            size, lo, hi, k, stride))
    return span // stride + 1


def conv2d(x, weight, bias=None, stride=1, pad=0):
    """
    2-D cross-correlation.

    Parameters
    ----------

    x : Tensor (N, C, H, W)

    weight : Tensor (F, C, k, k), k odd

    bias : Tensor (F,), optional

    stride : int, 1 or 2

    pad : int or (before, after)
        zero padding applied to both spatial axes; a pair pads
        top/left by `before` and bottom/right by `after`

    Returns
    -------

    out : Tensor (N, F, H', W'), H' = (H + before + after - k) / stride + 1

    Raises
    ------

    ShapeError
        channel mismatch, even or non-square kernel, or an output size
        that is not an integer
    """

    if x.ndim != 4 or weight.ndim != 4:
        raise ShapeError('conv2d expects 4-D input and weight, got {} and {}'.format(
            x.shape, weight.shape))
    N, C, H, W = x.shape
    F, Cw, k, kw = weight.shape
    if Cw != C:
        raise ShapeError('weight expects {} input channels, input has {}'.format(Cw, C))
    if k != kw or k % 2 == 0:
        raise ShapeError('kernel must be square with odd size, got {}x{}'.format(k, kw))
    if stride not in (1, 2):
        raise ValueError('stride must be 1 or 2, got {}'.format(stride))
    if bias is not None and bias.shape != (F,):
        raise ShapeError('bias must have shape ({},), got {}'.format(F, bias.shape))

    lo, hi = _pair(pad)
    Ho = _out_size(H, lo, hi, k, stride)
    Wo = _out_size(W, lo, hi, k, stride)

    xp = np.pad(x.data, ((0, 0), (0, 0), (lo, hi), (lo, hi))) if lo or hi \
        else np.ascontiguousarray(x.data)
    s = xp.strides
    ckk = C * k * k

    def cols(n):
        view = as_strided(xp[n], shape=(C, k, k, Ho, Wo),
                          strides=(s[1], s[2], s[3], s[2] * stride, s[3] * stride),
                          writeable=False)
        return view.reshape(ckk, Ho * Wo)

    W2 = weight.data.reshape(F, ckk)
    out = np.empty((N, F, Ho, Wo), dtype=x.dtype)
    for n in range(N):
        out[n] = (W2 @ cols(n)).reshape(F, Ho, Wo)
    if bias is not None:
        out += bias.data[None, :, None, None]

    def backward_fn(g):
        g = np.ascontiguousarray(g)
        gx = gw = gb = None
        if weight.requires_grad:
            gw = np.zeros((F, ckk), dtype=weight.dtype)
            for n in range(N):
                gw += g[n].reshape(F, Ho * Wo) @ cols(n).T
            gw = gw.reshape(weight.shape)
        if x.requires_grad:
            dcols = np.matmul(W2.T, g.reshape(N, F, Ho * Wo)).reshape(N, C, k, k, Ho, Wo)
            dxp = np.zeros(xp.shape, dtype=x.dtype)
            for i in range(k):
                for j in range(k):
                    dxp[:, :, i:i + stride * Ho:stride, j:j + stride * Wo:stride] += dcols[:, :, i, j]
            gx = dxp[:, :, lo:lo + H, lo:lo + W]
        if bias is not None:
            if bias.requires_grad:
                gb = g.sum(axis=(0, 2, 3))
            return gx, gw, gb
        return gx, gw

    parents = (x, weight) if bias is None else (x, weight, bias)
    return Tensor(out, parents=parents, op='conv2d', backward_fn=backward_fn)


def _check_broadcast(a, b):
    if a.shape == b.shape:
        return
    if a.ndim == 4 and b.ndim == 4 and a.shape[0] == b.shape[0] \
            and a.shape[2:] == b.shape[2:] and 1 in (a.shape[1], b.shape[1]):
        return
    raise ShapeError('incompatible shapes {} and {}'.format(a.shape, b.shape))


def _reduce_to(g, shape):
    if g.shape == shape:
        return g
    return g.sum(axis=1, keepdims=True)


def add(a, b):
    """a + b; b may be a scalar or broadcast over a 1-sized channel axis"""
    if not isinstance(b, Tensor) and np.ndim(b) == 0:
        return scalar_affine(a, 1., b)
    a, b = as_tensor(a, b if isinstance(b, Tensor) else None), as_tensor(b, a)
    _check_broadcast(a, b)

    def backward_fn(g):
        return _reduce_to(g, a.shape), _reduce_to(g, b.shape)

    return Tensor(a.data + b.data, parents=(a, b), op='add', backward_fn=backward_fn)


def mul(a, b):
    """a * b; b may be a scalar or broadcast over a 1-sized channel axis"""
    if not isinstance(b, Tensor) and np.ndim(b) == 0:
        return scalar_affine(a, b, 0.)
    a, b = as_tensor(a, b if isinstance(b, Tensor) else None), as_tensor(b, a)
    _check_broadcast(a, b)

    def backward_fn(g):
        ga = _reduce_to(g * b.data, a.shape) if a.requires_grad else None
        gb = _reduce_to(g * a.data, b.shape) if b.requires_grad else None
        return ga, gb

    return Tensor(a.data * b.data, parents=(a, b), op='mul', backward_fn=backward_fn)


def relu(x):
    mask = x.data > 0

    def backward_fn(g):
        return (g * mask,)

    return Tensor(np.where(mask, x.data, 0).astype(x.dtype), parents=(x,), op='relu',
                  backward_fn=backward_fn)


def sigmoid(x):
    s = expit(x.data)

    def backward_fn(g):
        return (g * s * (1 - s),)

    return Tensor(s, parents=(x,), op='sigmoid', backward_fn=backward_fn)


def scalar_affine(x, scale=1., shift=0.):
    """scale * x + shift for python scalars"""

    def backward_fn(g):
        return (g * scale,)

    out = (x.data * scale + shift).astype(x.dtype, copy=False)
    return Tensor(out, parents=(x,), op='scalar_affine', backward_fn=backward_fn)


def gauss_act(x, sigma=1.):
    """
    Spatial activation m(x) = sigma (exp(-(x - 0.5)^2) - exp(-1/4)) + 1,
    derivative -2 sigma (x - 0.5) exp(-(x - 0.5)^2).
    """

    d = x.data - 0.5
    e = np.exp(-d * d)
    # same ufunc on the same dtype, so m(0) and m(1) come out as exactly 1
    e_quarter = np.exp(np.full_like(d, -0.25))

    def backward_fn(g):
        return (g * (-2. * sigma) * d * e,)

    out = (sigma * (e - e_quarter) + 1.).astype(x.dtype, copy=False)
    return Tensor(out, parents=(x,), op='gauss_act', backward_fn=backward_fn)


_ELEMENTWISE = {
    'add': add,
    'mul': mul,
    'relu': lambda a, b=None: relu(a),
    'sigmoid': lambda a, b=None: sigmoid(a),
    'scalar_affine': lambda a, b=(1., 0.): scalar_affine(a, *((b, 0.) if np.ndim(b) == 0 else b)),
    'gauss_act': lambda a, b=1.: gauss_act(a, 1. if b is None else b),
}


def elementwise(kind, a, b=None):
    """
    Dispatch by name to one of the elementwise operations.

    Parameters
    ----------

    kind : str
        'add', 'mul', 'relu', 'sigmoid', 'scalar_affine' or 'gauss_act'

    a : Tensor

    b : Tensor, scalar or pair, optional
        second operand of add/mul, (scale, shift) of scalar_affine,
        sigma of gauss_act
    """

    try:
        fn = _ELEMENTWISE[kind]
    except KeyError:
        raise ValueError('unknown elementwise kind {!r}'.format(kind))
    if b is None:
        return fn(a)
    return fn(a, b)


def detach(x):
    """same values, no gradient flows back"""
    return x.detach()


def upsample_nearest(x, factor):
    """replicate each pixel into a factor x factor block"""

    factor = int(factor)
    if factor == 1:
        return x
    if factor < 1:
        raise ValueError('factor must be a positive integer')
    N, C, H, W = x.shape
    out = x.data.repeat(factor, axis=2).repeat(factor, axis=3)

    def backward_fn(g):
        return (g.reshape(N, C, H, factor, W, factor).sum(axis=(3, 5)),)

    return Tensor(out, parents=(x,), op='upsample_nearest', backward_fn=backward_fn)


def upsample_nearest2x(x):
    """(N, C, H, W) -> (N, C, 2H, 2W) by 2x2 replication"""
    return upsample_nearest(x, 2)


def subsample(x, factor=2):
    """keep every `factor`-th row and column, starting at 0"""

    shape = x.shape
    out = np.ascontiguousarray(x.data[:, :, ::factor, ::factor])

    def backward_fn(g):
        gx = np.zeros(shape, dtype=g.dtype)
        gx[:, :, ::factor, ::factor] = g
        return (gx,)

    return Tensor(out, parents=(x,), op='subsample', backward_fn=backward_fn)


def concat_channels(*tensors):
    """
    Concatenate along the channel axis. Zero-channel tensors are allowed
    and contribute nothing.
    """

    if not tensors:
        raise ValueError('concat_channels needs at least one tensor')
    ref = tensors[0].shape
    for t in tensors[1:]:
        if t.ndim != 4 or t.shape[0] != ref[0] or t.shape[2:] != ref[2:]:
            raise ShapeError('cannot concatenate {} with {}'.format(t.shape, ref))
    if len(tensors) == 1:
        return tensors[0]

    bounds = np.cumsum([0] + [t.shape[1] for t in tensors])
    out = np.concatenate([t.data for t in tensors], axis=1)

    def backward_fn(g):
        return tuple(g[:, bounds[i]:bounds[i + 1]] for i in range(len(tensors)))

    return Tensor(out, parents=tensors, op='concat_channels', backward_fn=backward_fn)


def batchnorm2d(x, gamma, beta, state, mode='train'):
    """
    Batch normalization over (N, H, W) per channel.

    Train mode normalizes with the batch mean and (biased) variance and
    updates `state` with momentum; the running variance uses the unbiased
    estimate. Eval mode normalizes with the running statistics.

    Parameters
    ----------

    x : Tensor (N, C, H, W)

    gamma, beta : Tensor (C,)

    state : BatchNormState

    mode : str, 'train' or 'eval'
    """

    if mode not in ('train', 'eval'):
        raise ValueError('mode must be train or eval, got {}'.format(mode))
    N, C, H, W = x.shape
    if gamma.shape != (C,) or beta.shape != (C,):
        raise ShapeError('gamma and beta must have shape ({},)'.format(C))

    n = N * H * W
    if mode == 'train':
        if n < 2:
            raise ValueError('train mode batch normalization needs N*H*W >= 2')
        mean = x.data.mean(axis=(0, 2, 3))
        var = x.data.var(axis=(0, 2, 3))
        m = state.momentum
        dt = state.running_mean.dtype
        state.running_mean = ((1 - m) * state.running_mean + m * mean).astype(dt)
        state.running_var = ((1 - m) * state.running_var + m * var * (n / (n - 1.))).astype(dt)
    else:
        mean = state.running_mean.astype(x.dtype)
        var = state.running_var.astype(x.dtype)

    inv = (1. / np.sqrt(var + state.eps)).astype(x.dtype)[None, :, None, None]
    xhat = (x.data - mean[None, :, None, None]) * inv
    out = gamma.data[None, :, None, None] * xhat + beta.data[None, :, None, None]

    def backward_fn(g):
        dgamma = (g * xhat).sum(axis=(0, 2, 3))
        dbeta = g.sum(axis=(0, 2, 3))
        dxhat = g * gamma.data[None, :, None, None]
        if mode == 'train':
            dx = inv / n * (n * dxhat - dxhat.sum(axis=(0, 2, 3), keepdims=True)
                            - xhat * (dxhat * xhat).sum(axis=(0, 2, 3), keepdims=True))
        else:
            dx = dxhat * inv
        return dx, dgamma, dbeta

    return Tensor(out, parents=(x, gamma, beta), op='batchnorm2d', backward_fn=backward_fn)


def tensor_sum(x):
    """sum of all elements, a scalar tensor"""

    shape, dtype = x.shape, x.dtype

    def backward_fn(g):
        return (np.full(shape, g, dtype=dtype),)

    return Tensor(np.sum(x.data), parents=(x,), op='sum', backward_fn=backward_fn)


def weighted_sum(tensors, coeffs):
    """sum_i coeffs[i] * tensors[i] over same-shaped tensors"""

    tensors = list(tensors)
    coeffs = [float(c) for c in coeffs]
    if len(tensors) != len(coeffs) or not tensors:
        raise ValueError('need one coefficient per tensor')
    shape = tensors[0].shape
    for t in tensors:
        if t.shape != shape:
            raise ShapeError('weighted_sum shapes differ: {} and {}'.format(t.shape, shape))

    out = coeffs[0] * tensors[0].data
    for c, t in zip(coeffs[1:], tensors[1:]):
        out = out + c * t.data

    def backward_fn(g):
        return tuple(g * c for c in coeffs)

    return Tensor(np.asarray(out, dtype=tensors[0].dtype), parents=tuple(tensors),
                  op='weighted_sum', backward_fn=backward_fn)


def square_sum(tensors, scale=1.):
    """scale * sum of squares of every element of every tensor"""

    tensors = list(tensors)
    dtype = tensors[0].dtype if tensors else np.float64
    total = 0.
    for t in tensors:
        total += float(np.sum(t.data.astype(np.float64) ** 2))

    def backward_fn(g):
        return tuple(g * 2. * scale * t.data for t in tensors)

    return Tensor(np.asarray(scale * total, dtype=dtype), parents=tuple(tensors),
                  op='square_sum', backward_fn=backward_fn)
