# -*- coding: utf-8 -*-
# pylint: disable=invalid-name, too-many-arguments

"""VesselPy library.

Reverse-mode automatic differentiation: the Tensor node, the backward
pass, and named parameter collections.

A Tensor wraps a numpy array. Operations in `vesselpy.autodiff.ops`
return new tensors that remember their parents and a closure computing
the parents' gradients from the output gradient. `backward` walks the
graph in reverse topological order.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from collections import OrderedDict

import numpy as np

from vesselpy.common.helpers import pretty_str


class Tensor(object):
    """
    Value node of a differentiation graph.

    Parameters
    ----------

    data : array_like
        values; kept as given when already a floating ndarray

    requires_grad : bool, default=False
        leaf tensors with requires_grad accumulate gradients in `grad`

    parents : tuple of Tensor
        inputs of the operation that produced this tensor

    op : str
        operation tag, 'leaf' for inputs and parameters

    backward_fn : callable, optional
        maps the output gradient to a tuple of parent gradients (None for
        parents that need none)

    Attributes
    ----------

    grad : ndarray or None
        accumulated gradient, same shape as `data`
    """

    def __init__(self, data, requires_grad=False, parents=(), op='leaf',
                 backward_fn=None, name=None):
        data = np.asarray(data)
        if data.dtype.kind != 'f':
            data = data.astype(np.float64)
        self.data = data
        self.parents = tuple(parents)
        self.op = op
        self.name = name
        self.grad = None
        self._backward_fn = backward_fn
        self.requires_grad = bool(requires_grad) or any(p.requires_grad for p in self.parents)

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    @property
    def is_leaf(self):
        return not self.parents

    def item(self):
        """value of a one element tensor as a python float"""
        if self.data.size != 1:
            raise ValueError("item() needs a one element tensor, got shape {}".format(self.shape))
        return float(self.data.reshape(-1)[0])

    def zero_grad(self):
        self.grad = None

    def detach(self):
        """same values, cut from the graph"""
        return Tensor(self.data, requires_grad=False)

    def _accumulate(self, g):
        if self.grad is None:
            self.grad = np.array(g, dtype=self.data.dtype, copy=True)
        else:
            self.grad = self.grad + g

    def __repr__(self):
        return '\n'.join([
            'Tensor object',
            pretty_str('op', self.op),
            pretty_str('shape', self.shape),
            pretty_str('dtype', self.dtype),
            pretty_str('requires_grad', self.requires_grad),
        ])


def topological_order(root):
    """
    Tensors reachable from `root` through parents that require gradients,
    every tensor listed after all of its parents.
    """

    order = []
    seen = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node.parents:
            if p.requires_grad and id(p) not in seen:
                stack.append((p, False))
    return order


def backward(loss, intermediate=True):
    """
    Backpropagate from a scalar loss.

    The gradient of `loss` with respect to every reachable tensor that
    requires gradients is added to its `grad`. Calling twice without
    zeroing adds twice.

    Parameters
    ----------

    loss : Tensor
        scalar (one element) tensor

    intermediate : bool, default=True
        also store gradients on non-leaf tensors. Training turns this off
        to keep memory down; leaves are always updated.

    Raises
    ------

    ValueError
        `loss` is not a scalar
    """

    if loss.data.size != 1:
        raise ValueError('backward needs a scalar loss, got shape {}'.format(loss.shape))
    if not loss.requires_grad:
        return

    grads = {id(loss): np.ones_like(loss.data)}
    for node in reversed(topological_order(loss)):
        g = grads.pop(id(node), None)
        if g is None:
            continue
        if node.is_leaf or intermediate:
            node._accumulate(g)
        if node.is_leaf:
            continue

        parent_grads = node._backward_fn(g)
        for p, pg in zip(node.parents, parent_grads):
            if pg is None or not p.requires_grad:
                continue
            key = id(p)
            grads[key] = grads[key] + pg if key in grads else pg


class BatchNormState(object):
    """
    Running statistics of one batch normalization layer.

    Starts at mean 0 and variance 1, so eval mode before any training step
    is the identity up to the affine parameters.
    """

    def __init__(self, channels, dtype=np.float32, momentum=0.1, eps=1e-5):
        self.running_mean = np.zeros(channels, dtype=dtype)
        self.running_var = np.ones(channels, dtype=dtype)
        self.momentum = momentum
        self.eps = eps

    def copy(self, dtype=None):
        dtype = self.running_mean.dtype if dtype is None else dtype
        s = BatchNormState(len(self.running_mean), dtype, self.momentum, self.eps)
        s.running_mean = self.running_mean.astype(dtype, copy=True)
        s.running_var = self.running_var.astype(dtype, copy=True)
        return s


#: parameter kinds; only conv weights are subject to weight decay
KINDS = ('conv_weight', 'conv_bias', 'bn_gamma', 'bn_beta')


class ParameterSet(object):
    """
    Ordered collection of named trainable tensors plus the batch
    normalization states of a network. Iteration order is insertion
    order, which `build_network` keeps fixed.

    Examples
    --------

    >>> params = ParameterSet()
    >>> w = params.add('conv1.weight', np.zeros((4, 3, 3, 3)))
    >>> list(params)
    ['conv1.weight']
    """

    def __init__(self):
        self._params = OrderedDict()
        self._kinds = OrderedDict()
        self.buffers = OrderedDict()

    def add(self, name, data, kind='conv_weight'):
        """add a trainable tensor; returns it"""
        if name in self._params:
            raise ValueError('duplicate parameter name {}'.format(name))
        if kind not in KINDS:
            raise ValueError('unknown parameter kind {}'.format(kind))
        t = Tensor(data, requires_grad=True, name=name)
        self._params[name] = t
        self._kinds[name] = kind
        return t

    def add_buffer(self, name, state):
        if name in self.buffers:
            raise ValueError('duplicate buffer name {}'.format(name))
        self.buffers[name] = state
        return state

    def __getitem__(self, name):
        return self._params[name]

    def __contains__(self, name):
        return name in self._params

    def __iter__(self):
        return iter(self._params)

    def __len__(self):
        return len(self._params)

    def items(self):
        return self._params.items()

    def kind(self, name):
        return self._kinds[name]

    def decayed(self):
        """conv weight tensors, the ones weight decay applies to"""
        return [t for n, t in self._params.items() if self._kinds[n] == 'conv_weight']

    def count(self):
        """number of trainable scalars"""
        return int(sum(t.size for t in self._params.values()))

    def zero_grad(self):
        for t in self._params.values():
            t.zero_grad()

    @property
    def dtype(self):
        for t in self._params.values():
            return t.dtype
        return np.dtype(np.float32)

    def copy(self, dtype=None):
        """deep copy, optionally converted to another float type"""
        out = ParameterSet()
        for name, t in self._params.items():
            data = t.data if dtype is None else t.data.astype(dtype)
            out.add(name, np.array(data, copy=True), self._kinds[name])
        for name, s in self.buffers.items():
            out.add_buffer(name, s.copy(dtype))
        return out

    def __repr__(self):
        return '\n'.join([
            'ParameterSet object',
            pretty_str('tensors', len(self)),
            pretty_str('scalars', self.count()),
            pretty_str('buffers', len(self.buffers)),
        ])
