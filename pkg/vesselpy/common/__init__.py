# -*- coding: utf-8 -*-
"""VesselPy library.

Helpers shared by every subpackage.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from .errors import (VesselPyError, RasterError, LabelColorError, ShapeError,
                     ConfigError, CheckpointError, ConfigHashMismatch,
                     NonFiniteLossError, EmptyEvaluationError)
from .helpers import Saver, pretty_str, ordered_map, float_dtype
