# -*- coding: utf-8 -*-
"""VesselPy library.

Prediction output files of one image::

    <out>/<name>.vessel.png      probabilities as 8-bit gray
    <out>/<name>.artery.png
    <out>/<name>.vein.png
    <out>/<name>.av.png          artery red, vein blue overlay
    <out>/<name>.activation.png  rescaled spatial activation
    <out>/<name>.npz             float maps and coverage
    <out>/<name>.txt             threshold, stride, config hash

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import logging
import os

import numpy as np

from vesselpy.inference.decision import decide_av
from vesselpy.inference.predict import TriProbMap
from vesselpy.io.raster import write_av_overlay, write_gray_map

logger = logging.getLogger(__name__)


def prediction_paths(out_dir, name):
    base = os.path.join(str(out_dir), name)
    paths = {k: '{}.{}.png'.format(base, k)
             for k in ('vessel', 'artery', 'vein', 'av', 'activation')}
    paths['npz'] = base + '.npz'
    paths['sidecar'] = base + '.txt'
    return paths


def write_prediction(out_dir, tri, threshold=0.5, stride=10, config_hash=''):
    """
    Write every output file of one prediction; returns the path dict.

    The overlay shows the 'detected' mode decision at `threshold`. A
    missing activation map is written as zeros.
    """

    os.makedirs(str(out_dir), exist_ok=True)
    name = tri.name or 'image'
    paths = prediction_paths(out_dir, name)

    activation = tri.activation if tri.activation is not None else np.zeros(tri.shape)
    for key, values in (('vessel', tri.vessel), ('artery', tri.artery), ('vein', tri.vein),
                        ('activation', activation)):
        write_gray_map(values, paths[key])
    write_av_overlay(decide_av(tri, threshold, 'detected'), paths['av'])

    np.savez_compressed(paths['npz'], vessel=tri.vessel, artery=tri.artery, vein=tri.vein,
                        coverage=tri.coverage, activation=activation)
    with open(paths['sidecar'], 'w') as f:
        f.write('threshold\t{!r}\n'.format(float(threshold)))
        f.write('stride\t{}\n'.format(int(stride)))
        f.write('config_hash\t{}\n'.format(config_hash))
    logger.debug('wrote prediction of %s to %s', name, out_dir)
    return paths


def read_prediction(path, name=None):
    """TriProbMap back from a `.npz` written by `write_prediction`"""
    with np.load(str(path)) as data:
        if name is None:
            name = os.path.basename(str(path))[:-len('.npz')]
        return TriProbMap(data['vessel'], data['artery'], data['vein'], data['coverage'],
                          data['activation'], name)


def read_sidecar(path):
    """dict of the sidecar fields, values as strings"""
    with open(str(path)) as f:
        return dict(line.rstrip('\n').split('\t', 1) for line in f if line.strip())
