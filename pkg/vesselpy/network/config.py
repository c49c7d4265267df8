# -*- coding: utf-8 -*-
"""VesselPy library.

Architecture configuration and its fingerprint.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass, asdict, replace
import hashlib
import json


@dataclass(frozen=True)
class NetworkConfig(object):
    """
    Architecture parameters.

    Parameters
    ----------

    in_channels : int, default=8
        channels of the preprocessed input stack

    width : int, default=16
        base width W; encoder stages have W, 2W, 4W, 8W channels

    stages : int, default=4
        encoder stages of two residual blocks each; every stage after the
        first halves the resolution

    sigma : float, default=1.0
        activation factor of the spatial activation. 0 turns the
        activation into the identity (m = 1 everywhere).

    side_outputs : int, default=3
        deep supervision heads, one after each encoder stage but the last

    patch_size : int, default=64
        spatial size of training and inference patches

    multitask : bool, default=True
        two-branch output block. False gives the single-branch baseline
        whose head predicts artery and vein directly from the decoder.

    multi_input : bool, default=True
        feed the full 8 channel stack through the expanding-compressing
        layer. False feeds the raw RGB channels to the encoder stem.

    activation : bool, default=True
        multiply branch A features by the spatial activation map

    deep_supervision : bool, default=True
        build and train the side heads

    detach_activation : bool, default=False
        stop gradients of the activation map from reaching branch V
    """

    in_channels: int = 8
    width: int = 16
    stages: int = 4
    sigma: float = 1.0
    side_outputs: int = 3
    patch_size: int = 64
    multitask: bool = True
    multi_input: bool = True
    activation: bool = True
    deep_supervision: bool = True
    detach_activation: bool = False

    def __post_init__(self):
        if self.in_channels < 3:
            raise ValueError('in_channels must be at least 3, got {}'.format(self.in_channels))
        if self.width < 1:
            raise ValueError('width must be 1 or greater')
        if self.stages < 2:
            raise ValueError('stages must be 2 or greater')
        if self.side_outputs != self.stages - 1:
            raise ValueError('side_outputs must be stages - 1 = {}, got {}'.format(
                self.stages - 1, self.side_outputs))
        if self.patch_size < 1 or self.patch_size % self.downsampling:
            raise ValueError('patch_size must be a positive multiple of {}, got {}'.format(
                self.downsampling, self.patch_size))
        if not self.sigma >= 0:
            raise ValueError('sigma must be non-negative, got {}'.format(self.sigma))

    @property
    def downsampling(self):
        """total resolution factor of the encoder"""
        return 2 ** (self.stages - 1)

    @property
    def input_channels(self):
        """channels the network actually reads from the stack"""
        return self.in_channels if self.multi_input else 3

    def stage_widths(self):
        return [self.width * 2 ** s for s in range(self.stages)]

    def config_hash(self):
        """sha256 hex digest of the architecture fields"""
        text = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()


#: ablation rows, each adding one component to the one before
ABLATION_LABELS = ('baseline', '+MT', '+MT+MI', '+MT+MI+AC')


def ablation_configs(cfg=NetworkConfig()):
    """
    The four ablation architectures derived from `cfg`.

    The baseline is a single direct artery/vein head on RGB input with
    neither activation nor side heads. '+MT' adds the two-branch output
    block together with deep supervision, '+MT+MI' the multi-channel
    input, '+MT+MI+AC' the spatial activation.

    Returns
    -------

    configs : dict
        label -> NetworkConfig, in ABLATION_LABELS order
    """

    switches = {
        'baseline': (False, False, False, False),
        '+MT': (True, False, False, True),
        '+MT+MI': (True, True, False, True),
        '+MT+MI+AC': (True, True, True, True),
    }
    keys = ('multitask', 'multi_input', 'activation', 'deep_supervision')
    return {label: replace(cfg, **dict(zip(keys, switches[label]))) for label in ABLATION_LABELS}
