# -*- coding: utf-8 -*-
"""VesselPy library.

Full-image prediction by tiled, stitched network inference, artery/vein
decisions and skeletonization.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from .tiling import TileGrid, axis_positions, tile_positions, stitch
from .predict import (InferenceConfig, TriProbMap, network_predictor, predict_stack,
                      predict_full)
from .decision import AV_MODES, AVDecision, decide_av, skeletonize
from .export import prediction_paths, write_prediction, read_prediction, read_sidecar
