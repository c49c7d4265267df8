# -*- coding: utf-8 -*-
"""VesselPy library.

Encoder-decoder network for joint vessel segmentation and artery/vein
classification, with deep supervision and a spatial activation linking
the two tasks.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from .config import NetworkConfig, ABLATION_LABELS, ablation_configs
from .activation import spatial_activation, activation_max, normalized_activation
from .model import (NetworkOutputs, HEAD_GAIN, layer_table, count_parameters,
                    build_network, forward)
