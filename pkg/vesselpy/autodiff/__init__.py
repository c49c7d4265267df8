# -*- coding: utf-8 -*-
"""VesselPy library.

Minimal reverse-mode automatic differentiation over dense numpy arrays,
with exactly the operations the network needs.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from .tensor import (Tensor, BatchNormState, ParameterSet, KINDS, backward,
                     topological_order)
from .ops import (as_tensor, conv2d, add, mul, relu, sigmoid, scalar_affine,
                  gauss_act, elementwise, detach, upsample_nearest,
                  upsample_nearest2x, subsample, concat_channels, batchnorm2d,
                  tensor_sum, weighted_sum, square_sum)
from .gradcheck import relative_error, grad_check, sampled_grad_check, op_suite
