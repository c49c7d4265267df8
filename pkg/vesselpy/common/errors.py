# -*- coding: utf-8 -*-
"""VesselPy library.

Exception hierarchy. Every error raised on purpose by vesselpy derives from
`VesselPyError`, and also from the builtin exception it refines, so callers
that only know about `ValueError` or `IOError` keep working.

This is licensed under an MIT license. See the README.rst file
for more information.
"""


class VesselPyError(Exception):
    """Base class of all vesselpy errors."""


class RasterError(VesselPyError, IOError):
    """A raster could not be read or written.

    Parameters
    ----------

    path : str
        file that failed

    cause : str
        short description of what went wrong
    """

    def __init__(self, path, cause):
        self.path = str(path)
        self.cause = cause
        super(RasterError, self).__init__('{}: {}'.format(self.path, cause))


class LabelColorError(VesselPyError, ValueError):
    """A label raster holds a color that is not in the color table."""

    def __init__(self, row, col, color):
        self.row = int(row)
        self.col = int(col)
        self.color = tuple(int(c) for c in color)
        super(LabelColorError, self).__init__(
            'unknown label color {} at pixel (row={}, col={})'.format(
                self.color, self.row, self.col))


class ShapeError(VesselPyError, ValueError):
    """Array or tensor shapes do not agree."""


class ConfigError(VesselPyError, ValueError):
    """Bad configuration key or value."""


class CheckpointError(VesselPyError):
    """Checkpoint file is malformed or does not fit the runtime."""


class ConfigHashMismatch(CheckpointError):
    """Checkpoint was written for a different network configuration."""

    def __init__(self, expected, found):
        self.expected = expected
        self.found = found
        super(ConfigHashMismatch, self).__init__(
            'config hash mismatch: runtime {} but checkpoint {}'.format(
                expected, found))


class NonFiniteLossError(VesselPyError, FloatingPointError):
    """Training produced a NaN or infinite loss.

    `iteration` is the failing step and `batch` the (image, top, left)
    triples of the patches that were in the batch.
    """

    def __init__(self, iteration, loss, batch):
        self.iteration = int(iteration)
        self.loss = float(loss)
        self.batch = list(batch)
        super(NonFiniteLossError, self).__init__(
            'non-finite loss {} at iteration {}; batch {}'.format(
                self.loss, self.iteration, self.batch))


class EmptyEvaluationError(VesselPyError, ValueError):
    """The pixel set a metric is computed over is empty."""
