# -*- coding: utf-8 -*-
# pylint: disable=invalid-name, too-many-arguments

"""VesselPy library.

Raster input and output: fundus images, field-of-view masks, color coded
artery/vein labels, probability maps and decision overlays. Everything on
disk is 8-bit PNG read and written through Pillow.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass, field
import logging
import os
from typing import Optional

import numpy as np
from PIL import Image

from vesselpy.common.errors import RasterError, LabelColorError, ShapeError
from vesselpy.common.helpers import pretty_str

logger = logging.getLogger(__name__)

ARTERY = 'artery'
VEIN = 'vein'
UNCERTAIN = 'uncertain'
BACKGROUND = 'background'

#: default label colors, AV-DRIVE convention. Crossings count as uncertain.
DEFAULT_COLOR_TABLE = {
    (255, 0, 0): ARTERY,
    (0, 0, 255): VEIN,
    (0, 255, 0): UNCERTAIN,
    (255, 255, 255): UNCERTAIN,
    (0, 0, 0): BACKGROUND,
}

# Pillow modes we refuse outright; anything not 8 bits per sample.
_WIDE_MODES = ('I', 'I;16', 'I;16B', 'I;16L', 'I;16N', 'F', 'RGBX;16', 'RGB;16')

# Pillow decodes 16-bit RGB PNGs to plain 'RGB', so PNG depth is read from the header
_PNG_SIGNATURE = b'\x89PNG\r\n\x1a\n'


def _png_bit_depth(path):
    """bits per sample from the IHDR chunk of a PNG file, None for other formats"""

    with open(path, 'rb') as f:
        head = f.read(25)
    if len(head) < 25 or not head.startswith(_PNG_SIGNATURE) or head[12:16] != b'IHDR':
        return None
    return head[24]


@dataclass(repr=False)
class FundusImage(object):
    """
    Color fundus photograph scaled to [0, 1].

    Attributes
    ----------

    rgb : ndarray, shape (H, W, 3)
        channel values in [0, 1]

    fov : ndarray of bool, shape (H, W), optional
        field of view; None means the whole frame is in view

    name : str
        dataset name of the image, informational
    """

    rgb: np.ndarray
    fov: Optional[np.ndarray] = None
    name: str = ''

    def __post_init__(self):
        self.rgb = np.asarray(self.rgb, dtype=float)
        if self.rgb.ndim != 3 or self.rgb.shape[2] != 3:
            raise ShapeError('rgb must have shape (H, W, 3), got {}'.format(self.rgb.shape))
        if self.rgb.size and (self.rgb.min() < 0. or self.rgb.max() > 1.):
            raise ValueError('rgb values must lie in [0, 1]')
        if self.fov is not None:
            self.fov = np.asarray(self.fov, dtype=bool)
            if self.fov.shape != self.rgb.shape[:2]:
                raise ShapeError('fov shape {} does not match image shape {}'.format(
                    self.fov.shape, self.rgb.shape[:2]))

    @property
    def height(self):
        return self.rgb.shape[0]

    @property
    def width(self):
        return self.rgb.shape[1]

    @property
    def shape(self):
        """(height, width)"""
        return self.rgb.shape[:2]

    def fov_mask(self):
        """field of view mask, all True when the image has none"""
        if self.fov is None:
            return np.ones(self.shape, dtype=bool)
        return self.fov

    def __repr__(self):
        return '\n'.join([
            'FundusImage object',
            pretty_str('name', self.name),
            pretty_str('shape', self.shape),
            pretty_str('fov', self.fov is not None),
        ])


@dataclass(repr=False)
class LabelTriMap(object):
    """
    Per-pixel ground truth flags.

    `uncertain` holds crossings and vessel pixels of unknown class. The
    constructor enforces

    * artery, vein or uncertain implies vessel
    * artery and vein are disjoint
    * uncertain is disjoint from artery and vein
    """

    vessel: np.ndarray
    artery: np.ndarray
    vein: np.ndarray
    uncertain: np.ndarray = field(default=None)

    def __post_init__(self):
        self.vessel = np.asarray(self.vessel, dtype=bool)
        self.artery = np.asarray(self.artery, dtype=bool)
        self.vein = np.asarray(self.vein, dtype=bool)
        if self.uncertain is None:
            self.uncertain = np.zeros_like(self.vessel)
        self.uncertain = np.asarray(self.uncertain, dtype=bool)

        shape = self.vessel.shape
        for name in ('artery', 'vein', 'uncertain'):
            if getattr(self, name).shape != shape:
                raise ShapeError('{} mask shape does not match vessel mask'.format(name))

        if np.any((self.artery | self.vein | self.uncertain) & ~self.vessel):
            raise ValueError('artery, vein and uncertain pixels must be vessel pixels')
        if np.any(self.artery & self.vein):
            raise ValueError('artery and vein masks overlap')
        if np.any(self.uncertain & (self.artery | self.vein)):
            raise ValueError('uncertain pixels overlap artery or vein pixels')

    @property
    def shape(self):
        return self.vessel.shape

    def as_channels(self, dtype=np.float32):
        """stack as (4, H, W) in the order vessel, artery, vein, uncertain"""
        return np.stack([self.vessel, self.artery, self.vein, self.uncertain]).astype(dtype)

    def __repr__(self):
        return '\n'.join([
            'LabelTriMap object',
            pretty_str('shape', self.shape),
            pretty_str('vessel pixels', int(self.vessel.sum())),
            pretty_str('artery pixels', int(self.artery.sum())),
            pretty_str('vein pixels', int(self.vein.sum())),
            pretty_str('uncertain pixels', int(self.uncertain.sum())),
        ])


def _open_bytes(path, modes):
    """open `path` with Pillow and return an 8-bit array in one of `modes`"""

    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode in _WIDE_MODES:
                raise RasterError(path, 'unsupported bit depth (mode {})'.format(mode))
            depth = _png_bit_depth(path)
            if depth is not None and depth > 8:
                raise RasterError(path, 'unsupported bit depth ({} bits per sample)'.format(depth))
            if mode not in modes:
                im = im.convert(modes[0])
            return np.array(im, dtype=np.uint8)
    except RasterError:
        raise
    except FileNotFoundError as e:
        raise RasterError(path, 'file not found') from e
    except (OSError, SyntaxError, ValueError) as e:
        raise RasterError(path, 'truncated or unreadable data ({})'.format(e)) from e


def load_image(path, fov_path=None):
    """
    Load an 8-bit RGB raster as a FundusImage with values byte/255.

    Palette and alpha images are converted to RGB; grayscale rasters are
    replicated into three channels. Rasters with more than 8 bits per
    sample are rejected.

    Parameters
    ----------

    path : str or PathLike
        image file

    fov_path : str or PathLike, optional
        field of view mask, see `load_mask`

    Returns
    -------

    img : FundusImage

    Raises
    ------

    RasterError
        missing file, unsupported bit depth or truncated data; the
        message carries the path and the cause

    Examples
    --------

    >>> img = load_image('drive/images/01_test.png')
    >>> img.rgb.shape
    (584, 565, 3)
    """

    data = _open_bytes(path, ('RGB',))
    fov = None if fov_path is None else load_mask(fov_path)
    name = os.path.splitext(os.path.basename(str(path)))[0]
    logger.debug('loaded %s %s', path, data.shape)
    return FundusImage(data.astype(float) / 255., fov=fov, name=name)


def load_mask(path):
    """load a binary mask; any gray value above 127 is True"""

    return _open_bytes(path, ('L',)) > 127


def load_label(path, strict=True, color_table=None):
    """load and decode a color coded artery/vein label file"""

    return decode_av_label(_open_bytes(path, ('RGB',)), strict=strict,
                           color_table=color_table)


def to_bytes(rgb):
    """float raster in [0, 1] to uint8 with round half up"""

    rgb = np.asarray(rgb, dtype=float)
    if not np.all(np.isfinite(rgb)) or rgb.min() < 0. or rgb.max() > 1.:
        raise ValueError('raster values must be finite and lie in [0, 1]')
    return np.floor(rgb * 255. + 0.5).astype(np.uint8)


def decode_av_label(img, strict=True, color_table=None):
    """
    Decode a color coded artery/vein label into a LabelTriMap.

    Parameters
    ----------

    img : FundusImage or ndarray (H, W, 3) of uint8

    strict : bool, default=True
        reject colors that are not in the table. When False they are
        mapped to background.

    color_table : dict, optional
        maps (r, g, b) byte triples to one of 'artery', 'vein',
        'uncertain', 'background'. Defaults to `DEFAULT_COLOR_TABLE`.

    Returns
    -------

    tri : LabelTriMap

    Raises
    ------

    LabelColorError
        strict mode only, names the first offending pixel
    """

    if isinstance(img, FundusImage):
        data = to_bytes(img.rgb)
    else:
        data = np.asarray(img)
        if data.dtype != np.uint8:
            data = to_bytes(data)
    if data.ndim != 3 or data.shape[2] != 3:
        raise ShapeError('label raster must have shape (H, W, 3), got {}'.format(data.shape))

    table = DEFAULT_COLOR_TABLE if color_table is None else color_table
    code = (data[..., 0].astype(np.int32) << 16) | (data[..., 1].astype(np.int32) << 8) \
        | data[..., 2].astype(np.int32)

    masks = {ARTERY: np.zeros(code.shape, bool), VEIN: np.zeros(code.shape, bool),
             UNCERTAIN: np.zeros(code.shape, bool), BACKGROUND: np.zeros(code.shape, bool)}
    for color, kind in table.items():
        if kind not in masks:
            raise ValueError('unknown label class {!r} in color table'.format(kind))
        r, g, b = color
        masks[kind] |= code == ((r << 16) | (g << 8) | b)

    known = masks[ARTERY] | masks[VEIN] | masks[UNCERTAIN] | masks[BACKGROUND]
    if not np.all(known):
        bad = np.argwhere(~known)
        if strict:
            row, col = bad[0]
            raise LabelColorError(row, col, data[row, col])
        logger.debug('%d pixels with unknown label colors mapped to background', len(bad))

    vessel = masks[ARTERY] | masks[VEIN] | masks[UNCERTAIN]
    return LabelTriMap(vessel, masks[ARTERY], masks[VEIN], masks[UNCERTAIN])


def encode_av_label(tri, crossing_color=(0, 255, 0)):
    """
    Inverse of `decode_av_label` for the default table: artery red, vein
    blue, uncertain `crossing_color`, other vessel pixels white.

    Returns
    -------

    rgb : ndarray (H, W, 3) of uint8
    """

    out = np.zeros(tri.vessel.shape + (3,), dtype=np.uint8)
    out[tri.vessel] = (255, 255, 255)
    out[tri.uncertain] = crossing_color
    out[tri.artery] = (255, 0, 0)
    out[tri.vein] = (0, 0, 255)
    return out


def overlay_colors(decisions):
    """
    Render per-pixel (vessel, artery, vein) decisions: artery red, vein
    blue, vessel pixels of neither class white, background black.

    `decisions` is anything with boolean `vessel`, `artery` and `vein`
    attributes, e.g. a LabelTriMap or an AVDecision.
    """

    artery = np.asarray(decisions.artery, dtype=bool)
    vein = np.asarray(decisions.vein, dtype=bool)
    if np.any(artery & vein):
        raise ValueError('artery and vein decisions overlap')

    out = np.zeros(artery.shape + (3,), dtype=np.uint8)
    out[np.asarray(decisions.vessel, dtype=bool)] = (255, 255, 255)
    out[artery] = (255, 0, 0)
    out[vein] = (0, 0, 255)
    return out


def _save(array, path):
    try:
        Image.fromarray(array).save(str(path), format='PNG')
    except (OSError, ValueError) as e:
        raise RasterError(path, 'cannot write ({})'.format(e)) from e
    logger.debug('wrote %s', path)


def write_gray_map(values, path):
    """
    Write a scalar raster in [0, 1] as 8-bit grayscale,
    byte = floor(255 v + 0.5).

    Raises
    ------

    ValueError
        a value is outside [0, 1] or not finite

    RasterError
        the path cannot be written
    """

    values = np.asarray(values)
    if values.ndim != 2:
        raise ShapeError('gray map must be 2-D, got shape {}'.format(values.shape))
    _save(to_bytes(values), path)


def write_rgb(rgb, path):
    """write an (H, W, 3) raster given as uint8 or floats in [0, 1]"""

    rgb = np.asarray(rgb)
    if rgb.dtype != np.uint8:
        rgb = to_bytes(rgb)
    _save(rgb, path)


def write_mask(mask, path):
    """write a boolean mask as 0/255 grayscale"""

    _save(np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8), path)


def write_label(tri, path):
    """write a LabelTriMap in the default color convention"""

    _save(encode_av_label(tri), path)


def write_av_overlay(decisions, path):
    """
    Write artery/vein decisions as an RGB overlay, see `overlay_colors`.

    Examples
    --------

    >>> tri = load_label('labels/01_test.png')
    >>> write_av_overlay(tri, 'overlay.png')  # crossings come out white
    """

    _save(overlay_colors(decisions), path)
