# -*- coding: utf-8 -*-
"""VesselPy library.

Multi-task retinal vessel segmentation and artery/vein classification:
domain-knowledge input channels, an encoder-decoder network with a spatial
activation head and deep supervision, patch training, stitched inference
and the evaluation protocol that goes with them.

Documentation lives in docs/ (Sphinx).

This is licensed under an MIT license. See the README.rst file
for more information.
"""

__version__ = "0.1.0"
