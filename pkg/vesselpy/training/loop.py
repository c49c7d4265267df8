# -*- coding: utf-8 -*-
"""VesselPy library.

The training loop: sample, forward, loss, backward, step; with a run log
and periodic checkpoints.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import logging
import os

import numpy as np
from numpy.random import default_rng

from vesselpy.autodiff.tensor import backward
from vesselpy.common.errors import NonFiniteLossError
from vesselpy.common.helpers import Saver
from vesselpy.network.config import NetworkConfig
from vesselpy.network.model import build_network, forward
from vesselpy.training.checkpoint import (Checkpoint, check_config_hash, load_checkpoint,
                                          save_checkpoint)
from vesselpy.training.config import LossWeights, TrainConfig
from vesselpy.training.loss import total_loss
from vesselpy.training.optimizer import OptimState, lr_at, sgd_step
from vesselpy.training.sampling import sample_patch_batch

logger = logging.getLogger(__name__)

RUN_LOG = 'run_log.txt'


class TrainingProgress(object):
    """values recorded by the Saver after every step"""

    def __init__(self):
        self.iteration = 0
        self.loss = np.nan
        self.lr = np.nan


def initial_checkpoint(cfg=TrainConfig(), net_cfg=NetworkConfig()):
    """freshly initialized network and optimizer, nothing trained"""

    params = build_network(net_cfg, cfg.seed, cfg.dtype)
    rng = default_rng([cfg.seed, 1])
    return Checkpoint(net_cfg, params, OptimState.zeros(params),
                      rng.bit_generator.state, 0, cfg.precision)


def checkpoint_name(iteration):
    return 'checkpoint_{:06d}.ckpt'.format(iteration)


def train_loop(ts, cfg=TrainConfig(), net_cfg=NetworkConfig(), weights=LossWeights(),
               out_dir=None, resume=None):
    """
    Train the network.

    Parameters
    ----------

    ts : TrainingSet

    cfg : TrainConfig

    net_cfg : NetworkConfig
        its patch size must equal cfg.patch_size

    weights : LossWeights

    out_dir : str, optional
        receives `run_log.txt` (iter, loss, lr every cfg.log_every
        iterations and at the last one), periodic checkpoints and
        `final.ckpt`

    resume : Checkpoint or str, optional
        continue from this state; the continuation is bitwise identical to
        an uninterrupted run with the same configuration

    Returns
    -------

    ckpt : Checkpoint
        state after cfg.max_iter iterations, with the loss history of this
        call in `ckpt.history`

    Raises
    ------

    NonFiniteLossError
        the loss became NaN or infinite; carries the iteration and the
        (image, top, left) triples of the batch

    ConfigHashMismatch
        `resume` was trained with another architecture
    """

    if net_cfg.patch_size != cfg.patch_size:
        raise ValueError('patch sizes differ: network {}, training {}'.format(
            net_cfg.patch_size, cfg.patch_size))

    if resume is None:
        ckpt = initial_checkpoint(cfg, net_cfg)
    else:
        ckpt = load_checkpoint(resume) if isinstance(resume, str) else resume
        check_config_hash(ckpt, net_cfg)
        logger.info('resuming at iteration %d', ckpt.iteration)

    params, optim = ckpt.params, ckpt.optim
    rng = default_rng()
    rng.bit_generator.state = ckpt.rng_state
    lam = weights.lam if cfg.decay_mode == 'optimizer' else 0.

    progress = TrainingProgress()
    saver = Saver(progress)
    log = None
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        log = open(os.path.join(out_dir, RUN_LOG), 'a' if resume is not None else 'w')

    try:
        for it in range(ckpt.iteration, cfg.max_iter):
            lr = lr_at(it, cfg)
            batch = sample_patch_batch(ts, cfg.batch_size, cfg.patch_size, rng, cfg.dtype)
            out = forward(batch.x, params, net_cfg, 'train')
            loss = total_loss(out, batch.y, weights, params, cfg.decay_mode, cfg.two_sided)
            value = loss.item()
            if not np.isfinite(value):
                raise NonFiniteLossError(it, value, batch.index.tolist())
            backward(loss, intermediate=False)
            sgd_step(params, optim, lr, cfg.momentum, lam)

            progress.iteration, progress.loss, progress.lr = it, value, lr
            saver.save()
            if it % cfg.log_every == 0 or it == cfg.max_iter - 1:
                logger.info('iter %d loss %.6f lr %g', it, value, lr)
                if log is not None:
                    log.write('{}\t{!r}\t{!r}\n'.format(it, value, lr))
                    log.flush()

            done = it + 1
            if out_dir is not None and cfg.checkpoint_every and done % cfg.checkpoint_every == 0:
                _snapshot(ckpt, done, rng)
                save_checkpoint(ckpt, os.path.join(out_dir, checkpoint_name(done)))
    finally:
        if log is not None:
            log.close()

    _snapshot(ckpt, max(cfg.max_iter, ckpt.iteration), rng)
    if out_dir is not None:
        save_checkpoint(ckpt, os.path.join(out_dir, 'final.ckpt'))
    ckpt.history = saver
    return ckpt


def _snapshot(ckpt, iteration, rng):
    ckpt.iteration = iteration
    ckpt.rng_state = rng.bit_generator.state


def read_run_log(path):
    """
    Iterations, losses and learning rates of a run log.

    Returns
    -------

    iterations : ndarray of int

    losses, lrs : ndarray of float
    """

    rows = []
    with open(str(path)) as f:
        for line in f:
            if line.strip():
                it, loss, lr = line.split('\t')
                rows.append((int(it), float(loss), float(lr)))
    if not rows:
        return np.zeros(0, dtype=int), np.zeros(0), np.zeros(0)
    its, losses, lrs = zip(*rows)
    return np.array(its), np.array(losses), np.array(lrs)
