# -*- coding: utf-8 -*-
"""VesselPy library.

Checkpoint files: everything needed to resume training bitwise.

Layout::

    VESSELPY-CHECKPOINT <version>\\n
    <json header>\\n
    <raw little-endian tensor data>

The header holds the config hash, the iteration, the network config, the
precision, the sampling generator state and a directory of tensors with
name, group, kind, shape and byte offset into the data section. Groups
are 'param', 'running_mean', 'running_var' and 'velocity'.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass, asdict
import json
import logging
import os
from typing import Any, Optional

import numpy as np

from vesselpy.autodiff.tensor import ParameterSet, BatchNormState
from vesselpy.common.errors import CheckpointError, ConfigHashMismatch
from vesselpy.common.helpers import float_dtype, pretty_str
from vesselpy.network.config import NetworkConfig
from vesselpy.training.optimizer import OptimState

logger = logging.getLogger(__name__)

MAGIC = 'VESSELPY-CHECKPOINT'
FORMAT_VERSION = 1


@dataclass
class Checkpoint(object):
    """
    Training state after `iteration` steps.

    `history` is the in-memory Saver of the run that produced it and is
    not written to disk.
    """

    net_config: NetworkConfig
    params: ParameterSet
    optim: OptimState
    rng_state: dict
    iteration: int = 0
    precision: str = 'float32'
    version: int = FORMAT_VERSION
    history: Optional[Any] = None

    @property
    def config_hash(self):
        return self.net_config.config_hash()

    def __repr__(self):
        return '\n'.join([
            'Checkpoint object',
            pretty_str('iteration', self.iteration),
            pretty_str('precision', self.precision),
            pretty_str('config_hash', self.config_hash),
            pretty_str('parameters', self.params.count()),
        ])


def check_config_hash(ckpt, net_cfg):
    """raise ConfigHashMismatch unless `ckpt` was trained with `net_cfg`"""
    if ckpt.config_hash != net_cfg.config_hash():
        raise ConfigHashMismatch(net_cfg.config_hash(), ckpt.config_hash)


def _tensors(ckpt):
    """(name, group, kind, array) in file order"""
    params = ckpt.params
    for name, t in params.items():
        yield name, 'param', params.kind(name), t.data
    for name, s in params.buffers.items():
        yield name, 'running_mean', None, s.running_mean
        yield name, 'running_var', None, s.running_var
    for name, v in ckpt.optim.velocities.items():
        yield name, 'velocity', None, v


def save_checkpoint(ckpt, path):
    """
    Write `ckpt` to `path`, creating parent directories.

    Returns
    -------

    path : str
    """

    dtype = np.dtype(float_dtype(ckpt.precision)).newbyteorder('<')
    directory, blobs, offset = [], [], 0
    for name, group, kind, arr in _tensors(ckpt):
        data = np.ascontiguousarray(arr, dtype=dtype).tobytes()
        directory.append({'name': name, 'group': group, 'kind': kind,
                          'shape': list(arr.shape), 'offset': offset})
        blobs.append(data)
        offset += len(data)

    header = {
        'version': ckpt.version,
        'config_hash': ckpt.config_hash,
        'iteration': ckpt.iteration,
        'net_config': asdict(ckpt.net_config),
        'precision': ckpt.precision,
        'rng_state': ckpt.rng_state,
        'tensors': directory,
    }

    path = str(path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, 'wb') as f:
        f.write('{} {}\n'.format(MAGIC, FORMAT_VERSION).encode('ascii'))
        f.write(json.dumps(header, sort_keys=True).encode('utf-8') + b'\n')
        for blob in blobs:
            f.write(blob)
    logger.info('wrote checkpoint %s at iteration %d', path, ckpt.iteration)
    return path


def load_checkpoint(path, net_cfg=None):
    """
    Read a checkpoint file.

    Parameters
    ----------

    path : str

    net_cfg : NetworkConfig, optional
        when given, the stored config hash must match it

    Returns
    -------

    ckpt : Checkpoint

    Raises
    ------

    CheckpointError
        unreadable file, unknown format or version, truncated data

    ConfigHashMismatch
        the checkpoint belongs to a different architecture
    """

    path = str(path)
    try:
        with open(path, 'rb') as f:
            magic = f.readline().decode('ascii', 'replace').split()
            header = json.loads(f.readline().decode('utf-8'))
            data = f.read()
    except (OSError, ValueError) as e:
        raise CheckpointError('cannot read checkpoint {}: {}'.format(path, e)) from e

    if len(magic) != 2 or magic[0] != MAGIC:
        raise CheckpointError('{} is not a checkpoint file'.format(path))
    if int(magic[1]) != FORMAT_VERSION or header.get('version') != FORMAT_VERSION:
        raise CheckpointError('unsupported checkpoint version {}'.format(magic[1]))

    try:
        net_config = NetworkConfig(**header['net_config'])
    except TypeError as e:
        raise CheckpointError('bad network config in {}: {}'.format(path, e)) from e
    if net_config.config_hash() != header['config_hash']:
        raise CheckpointError('{}: stored config hash does not match its config'.format(path))
    if net_cfg is not None and net_cfg.config_hash() != header['config_hash']:
        raise ConfigHashMismatch(net_cfg.config_hash(), header['config_hash'])

    dtype = np.dtype(float_dtype(header['precision'])).newbyteorder('<')
    params = ParameterSet()
    buffers = {}
    velocities = []
    for item in header['tensors']:
        shape = tuple(item['shape'])
        count = int(np.prod(shape))
        end = item['offset'] + count * dtype.itemsize
        if end > len(data):
            raise CheckpointError('{}: tensor {} is truncated'.format(path, item['name']))
        arr = np.frombuffer(data, dtype=dtype, count=count, offset=item['offset'])
        arr = arr.reshape(shape).astype(dtype.newbyteorder('='))
        group = item['group']
        if group == 'param':
            params.add(item['name'], arr, item['kind'])
        elif group in ('running_mean', 'running_var'):
            buffers.setdefault(item['name'], {})[group] = arr
        elif group == 'velocity':
            velocities.append((item['name'], arr))
        else:
            raise CheckpointError('{}: unknown tensor group {}'.format(path, group))

    for name, stats in buffers.items():
        state = BatchNormState(len(stats['running_mean']), stats['running_mean'].dtype)
        state.running_mean = stats['running_mean']
        state.running_var = stats['running_var']
        params.add_buffer(name, state)

    ckpt = Checkpoint(net_config, params, OptimState(velocities, header['iteration']),
                      header['rng_state'], header['iteration'], header['precision'])
    logger.debug('read checkpoint %s at iteration %d', path, ckpt.iteration)
    return ckpt
