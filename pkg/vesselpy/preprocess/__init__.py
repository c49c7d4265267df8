# -*- coding: utf-8 -*-
"""VesselPy library.

Multi-input preprocessing: illumination correction, Gabor wavelet and
line detector vessel enhancement, and the standardized input stack.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from .stack import CHANNEL_NAMES, InputStack, build_stack, standardize
from .illumination import illumination_correct, default_background_sigma
from .gabor import GaborBankParams, gabor_kernel, gabor_enhance
from .line_detector import LineDetectorParams, line_kernel, line_responses, line_detect
from .pipeline import (PreprocessConfig, enhance, inverted_green, preprocess_image,
                       preprocess_cached)
from .cache import (write_channel_cache, read_channel_cache, has_channel_cache,
                    requantize)
