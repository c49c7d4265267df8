# -*- coding: utf-8 -*-
"""VesselPy library.

Image and label loading, artery/vein label decoding, raster output and
dataset indexing.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from .raster import (FundusImage, LabelTriMap, DEFAULT_COLOR_TABLE,
                     load_image, load_mask, load_label, decode_av_label,
                     encode_av_label, overlay_colors, to_bytes,
                     write_gray_map, write_rgb, write_mask, write_label,
                     write_av_overlay)
from .dataset import (DatasetEntry, DatasetIndex, index_dataset, load_entry,
                      read_manifest, write_manifest)
