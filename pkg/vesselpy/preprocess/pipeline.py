# -*- coding: utf-8 -*-
"""VesselPy library.

One call preprocessing: illumination correction, vessel enhancement on
the inverted green channel, and stack assembly.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass
import logging
from typing import Optional, Tuple

from vesselpy.preprocess.cache import has_channel_cache, read_channel_cache
from vesselpy.preprocess.gabor import GaborBankParams, gabor_enhance
from vesselpy.preprocess.illumination import illumination_correct
from vesselpy.preprocess.line_detector import LineDetectorParams, line_detect
from vesselpy.preprocess.stack import build_stack

logger = logging.getLogger(__name__)

_GABOR = GaborBankParams()
_LINE = LineDetectorParams()


@dataclass(frozen=True)
class PreprocessConfig(object):
    """
    Flat preprocessing parameters as they appear in a run config.

    `background_sigma` None means max(H, W) / 30. `use_cache` reads
    enhanced channels from `<root>/cache` when present; the cache holds
    requantized bytes, so cached runs are close to but not bit-identical
    with uncached ones.
    """

    background_sigma: Optional[float] = None
    gabor_scales: Tuple[float, ...] = _GABOR.scales
    gabor_orientations: Tuple[float, ...] = _GABOR.orientations
    gabor_elongation: float = _GABOR.elongation
    gabor_k0: Tuple[float, ...] = _GABOR.k0
    line_window: int = _LINE.window
    line_lengths: Tuple[int, ...] = _LINE.lengths
    line_orientations: Tuple[float, ...] = _LINE.orientations
    use_cache: bool = False

    def __post_init__(self):
        if self.background_sigma is not None and not self.background_sigma > 0:
            raise ValueError('background_sigma must be positive')
        # validates the banks
        self.gabor_params()
        self.line_params()

    def gabor_params(self):
        return GaborBankParams(tuple(self.gabor_scales), tuple(self.gabor_orientations),
                               self.gabor_elongation, tuple(self.gabor_k0))

    def line_params(self):
        return LineDetectorParams(self.line_window, tuple(self.line_lengths),
                                  tuple(self.line_orientations))


def inverted_green(img):
    """1 - G of a FundusImage; vessels become bright"""
    return 1. - img.rgb[..., 1]


def enhance(img, cfg=PreprocessConfig()):
    """
    Illumination correction and both enhancement filters.

    Returns
    -------

    ic : FundusImage

    gabor, line : ndarray (H, W)
    """

    ic = illumination_correct(img, cfg.background_sigma)
    inv = inverted_green(ic)
    return ic, gabor_enhance(inv, cfg.gabor_params()), line_detect(inv, cfg.line_params())


def preprocess_image(img, cfg=PreprocessConfig(), cached=None):
    """
    Full preprocessing of one FundusImage into an InputStack.

    Parameters
    ----------

    img : FundusImage

    cfg : PreprocessConfig

    cached : tuple (ic, gabor, line), optional
        precomputed enhancement, e.g. from `read_channel_cache`

    Returns
    -------

    stack : InputStack
    """

    if cached is None:
        ic, gabor, line = enhance(img, cfg)
    else:
        ic, gabor, line = cached
    logger.debug('preprocessed %s %s', img.name, img.shape)
    return build_stack(img, ic, gabor, line)


def preprocess_cached(img, cfg=PreprocessConfig(), root=None):
    """
    `preprocess_image`, reading enhanced channels from the byte cache of
    dataset `root` when `cfg.use_cache` is set and the cache exists.
    """

    cached = None
    if cfg.use_cache and root is not None and has_channel_cache(root, img.name):
        cached = read_channel_cache(root, img.name, img.fov)
        logger.debug('using cached channels of %s', img.name)
    return preprocess_image(img, cfg, cached)
