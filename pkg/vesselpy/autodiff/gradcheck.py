# -*- coding: utf-8 -*-
# pylint: disable=invalid-name

"""VesselPy library.

Central finite difference checks of backward-pass gradients, and the
per-operation check suite run by `vesselpy gradcheck`.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from collections import OrderedDict

import numpy as np
from numpy.random import default_rng

from vesselpy.autodiff import ops
from vesselpy.autodiff.tensor import Tensor, BatchNormState, backward


def relative_error(a, b, floor=1e-8):
    """|a - b| / max(|a|, |b|, floor)"""
    return abs(a - b) / max(abs(a), abs(b), floor)


def grad_check(f, t, eps=1e-5, coords=None, floor=1e-8):
    """
    Compare the backward-pass gradient of a scalar function with central
    differences.

    Parameters
    ----------

    f : callable
        f(t) -> scalar Tensor, deterministic

    t : Tensor
        point of evaluation; its values are perturbed in place and restored

    eps : float, default=1e-5
        finite difference step

    coords : iterable of int, optional
        flat indices to check, default all

    floor : float, default=1e-8
        lower bound of the relative error denominator

    Returns
    -------

    err : float
        max over checked coordinates of |a - n| / max(|a|, |n|, floor)

    Examples
    --------

    >>> t = Tensor(np.array([1., 2.]), requires_grad=True)
    >>> grad_check(lambda x: ops.tensor_sum(ops.mul(x, x)), t) < 1e-9
    True
    """

    t.zero_grad()
    backward(f(t), intermediate=False)
    analytic = np.zeros_like(t.data) if t.grad is None else t.grad.copy()

    worst = 0.
    for i in (range(t.size) if coords is None else coords):
        old = t.data.flat[i]
        t.data.flat[i] = old + eps
        fp = f(t).item()
        t.data.flat[i] = old - eps
        fm = f(t).item()
        t.data.flat[i] = old
        numeric = (fp - fm) / (2. * eps)
        worst = max(worst, relative_error(float(analytic.flat[i]), numeric, floor))
    return worst


def sampled_grad_check(loss_fn, tensors, eps=1e-5, per_tensor=3, seed=0, floor=1e-8,
                       refinements=0, scale_floor=1e-6, enough=1e-8):
    """
    Finite difference check of many tensors at a few random coordinates
    each, for functions too expensive to check densely.

    Parameters
    ----------

    loss_fn : callable
        loss_fn() -> scalar Tensor built from `tensors`

    tensors : dict of name -> Tensor

    eps : float, default=1e-5
        finite difference step

    per_tensor : int
        coordinates sampled per tensor (all of them if the tensor is
        smaller)

    floor : float, default=1e-8
        absolute lower bound of the relative error denominator

    refinements : int, default=0
        also try steps eps*10, eps/10, eps*100, eps/100, ... this many
        times and keep the smallest error. A step that carries a relu
        input across 0 gives a wrong difference quotient even for a
        correct gradient, and a step too small for the loss drowns in
        round-off.

    scale_floor : float, default=1e-6
        the denominator is at least scale_floor * |loss|; gradients that
        are negligible next to the loss are not compared digit by digit

    enough : float, default=1e-8
        refinement steps stop at the first error this small

    Returns
    -------

    errors : OrderedDict of name -> max relative error
    """

    for t in tensors.values():
        t.zero_grad()
    base = loss_fn()
    backward(base, intermediate=False)
    floor = max(floor, scale_floor * abs(base.item()))

    steps = [eps]
    for i in range(1, refinements + 1):
        steps += [eps * 10 ** i, eps / 10 ** i]
    rng = default_rng(seed)
    errors = OrderedDict()
    for name, t in tensors.items():
        analytic = np.zeros_like(t.data) if t.grad is None else t.grad.copy()
        n = min(per_tensor, t.size)
        worst = 0.
        for i in rng.choice(t.size, size=n, replace=False):
            old = t.data.flat[i]
            best = np.inf
            for h in steps:
                t.data.flat[i] = old + h
                fp = loss_fn().item()
                t.data.flat[i] = old - h
                fm = loss_fn().item()
                t.data.flat[i] = old
                best = min(best, relative_error(float(analytic.flat[i]), (fp - fm) / (2. * h), floor))
                if best <= enough:
                    break
            worst = max(worst, best)
        errors[name] = worst
    return errors


def _weighted(out, r):
    return ops.tensor_sum(ops.mul(out, Tensor(r)))


def _check_all(f, tensors, eps):
    """max grad_check error of f over each tensor in turn"""
    return max(grad_check(lambda _t: f(), t, eps) for t in tensors)


def op_suite(seed=0, eps=1e-5, linear_eps=1e-3):
    """
    Finite difference check of every differentiable operation on small
    random 64-bit inputs.

    Each function is reduced to a scalar by a random weighting of its
    output with weights bounded away from zero. Operations that are affine
    in each input (convolution, add, mul, upsampling, subsampling,
    concatenation, relu away from 0, the sum of squares) carry no
    truncation error and are checked with the larger `linear_eps`.

    Returns
    -------

    errors : OrderedDict of op name -> max relative error
    """

    rng = default_rng(seed)

    def leaf(*shape):
        return Tensor(rng.standard_normal(shape), requires_grad=True)

    def weights(*shape):
        sign = np.where(rng.random(shape) < 0.5, -1., 1.)
        return sign * rng.uniform(0.5, 1.5, shape)

    errors = OrderedDict()

    x, w, b = leaf(1, 2, 5, 5), leaf(3, 2, 3, 3), leaf(3)
    r = weights(1, 3, 5, 5)
    errors['conv2d'] = _check_all(
        lambda: _weighted(ops.conv2d(x, w, b, 1, 1), r), (x, w, b), linear_eps)

    x2, w2 = leaf(2, 2, 6, 6), leaf(3, 2, 3, 3)
    r2 = weights(2, 3, 3, 3)
    errors['conv2d_stride2'] = _check_all(
        lambda: _weighted(ops.conv2d(x2, w2, None, 2, (0, 1)), r2), (x2, w2), linear_eps)

    a, c = leaf(2, 3, 4, 4), leaf(2, 1, 4, 4)
    r = weights(2, 3, 4, 4)
    errors['add'] = _check_all(lambda: _weighted(ops.add(a, c), r), (a, c), linear_eps)
    errors['mul'] = _check_all(lambda: _weighted(ops.mul(a, c), r), (a, c), linear_eps)

    # relu and gauss_act inputs stay clear of the kink and the peak
    z = Tensor(weights(2, 3, 4, 4), requires_grad=True)
    errors['relu'] = _check_all(lambda: _weighted(ops.relu(z), r), (z,), linear_eps)
    errors['sigmoid'] = _check_all(lambda: _weighted(ops.sigmoid(a), r), (a,), eps)
    errors['scalar_affine'] = _check_all(
        lambda: _weighted(ops.scalar_affine(a, -1.7, 0.3), r), (a,), linear_eps)

    side = np.where(rng.random((2, 3, 4, 4)) < 0.5, -1., 1.)
    p = Tensor(0.5 + side * rng.uniform(0.05, 0.45, (2, 3, 4, 4)), requires_grad=True)
    errors['gauss_act'] = _check_all(lambda: _weighted(ops.gauss_act(p, 1.), r), (p,), eps)

    u = leaf(2, 3, 2, 2)
    errors['upsample_nearest2x'] = _check_all(
        lambda: _weighted(ops.upsample_nearest2x(u), r), (u,), linear_eps)
    errors['subsample'] = _check_all(
        lambda: _weighted(ops.subsample(a, 2), _every_other(r)), (a,), linear_eps)

    e = leaf(2, 2, 4, 4)
    r5 = weights(2, 5, 4, 4)
    errors['concat_channels'] = _check_all(
        lambda: _weighted(ops.concat_channels(e, a), r5), (e, a), linear_eps)

    g, bt = leaf(3), leaf(3)
    state = BatchNormState(3, np.float64)
    errors['batchnorm2d_train'] = _check_all(
        lambda: _weighted(ops.batchnorm2d(a, g, bt, state, 'train'), r), (a, g, bt), eps)
    state.running_var = rng.uniform(0.5, 2., 3)
    errors['batchnorm2d_eval'] = _check_all(
        lambda: _weighted(ops.batchnorm2d(a, g, bt, state, 'eval'), r), (a, g, bt), linear_eps)

    errors['square_sum'] = _check_all(lambda: ops.square_sum([a, c], 0.37), (a, c), linear_eps)
    return errors


def _every_other(r):
    """weights matching a 2x subsampled tensor"""
    return r[:, :, ::2, ::2]
