# -*- coding: utf-8 -*-
"""VesselPy library.

Weighted multi-task loss, SGD with momentum, patch sampling, the training
loop and checkpoints.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from .config import LossWeights, TrainConfig
from .loss import (CLIP, weighted_bce, split_labels, decay_term, compose_loss,
                   loss_terms, total_loss)
from .optimizer import OptimState, lr_at, sgd_step
from .sampling import TrainingSet, PatchBatch, build_training_set, sample_patch_batch
from .checkpoint import (Checkpoint, FORMAT_VERSION, check_config_hash,
                         save_checkpoint, load_checkpoint)
from .loop import (TrainingProgress, RUN_LOG, initial_checkpoint, checkpoint_name, train_loop,
                   read_run_log)
from .gradcheck import random_labels, network_grad_check
