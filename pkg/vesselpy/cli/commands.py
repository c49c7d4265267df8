# -*- coding: utf-8 -*-
"""VesselPy library.

The work behind each subcommand. Every command takes the effective
RunConfig plus its own options and returns an exit code.

Output layout under ``run.output_root``::

    prep/<name>.<channel>.png     standardized input channels
    train/                        run log, checkpoints, final.ckpt, loss.png
    predictions/                  rasters, .npz and sidecar per image
    eval/                         eval_report.txt, eval_rows.tsv, panels/
    ablation/<variant>/           train/ and predictions/ of each variant
    ablation/ablation.txt, .tsv   the ablation table

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import replace
import logging
import os

from vesselpy.autodiff.gradcheck import op_suite
from vesselpy.cli.config import write_config
from vesselpy.cli.synth import synth_dataset
from vesselpy.common.errors import CheckpointError
from vesselpy.common.helpers import ordered_map
from vesselpy.evaluation.evaluate import evaluate_dataset
from vesselpy.evaluation.plots import plot_loss, plot_panels
from vesselpy.evaluation.report import (AblationRun, ablation_report, write_ablation,
                                        write_reports)
from vesselpy.inference.export import (prediction_paths, read_prediction, read_sidecar,
                                       write_prediction)
from vesselpy.inference.predict import predict_full
from vesselpy.io.dataset import index_dataset, load_entry
from vesselpy.io.raster import load_image, write_gray_map
from vesselpy.network.config import ablation_configs
from vesselpy.preprocess.cache import requantize, write_channel_cache
from vesselpy.preprocess.pipeline import enhance, preprocess_image
from vesselpy.preprocess.stack import CHANNEL_NAMES
from vesselpy.training.checkpoint import load_checkpoint
from vesselpy.training.gradcheck import network_grad_check
from vesselpy.training.loop import RUN_LOG, read_run_log, train_loop
from vesselpy.training.sampling import build_training_set

logger = logging.getLogger(__name__)

#: relative error bounds of `gradcheck`
OP_TOLERANCE = 1e-6
BATCHNORM_TOLERANCE = 1e-5
NETWORK_TOLERANCE = 1e-4


def _out(cfg, *parts):
    return os.path.join(cfg.run.output_root, *parts)


def _split(name):
    return None if name == 'all' else name


def cmd_synth(cfg):
    root = cfg.run.dataset_root
    index = synth_dataset(cfg.synth_spec(), root, cfg.run.threads)
    write_config(cfg, root)
    print('generated {} images in {}'.format(len(index), root))
    return 0


def cmd_prep(cfg):
    """write the channel cache and previews of the standardized stack"""

    root = cfg.run.dataset_root
    out_dir = _out(cfg, 'prep')
    os.makedirs(out_dir, exist_ok=True)
    index = index_dataset(root, None)

    def one(entry):
        img = load_image(entry.image, entry.fov)
        img.name = entry.name
        ic, gabor, line = enhance(img, cfg.preprocess)
        write_channel_cache(root, entry.name, ic, gabor, line)
        stack = preprocess_image(img, cfg.preprocess, (ic, gabor, line))
        for channel, label in zip(stack.channels, CHANNEL_NAMES):
            write_gray_map(requantize(channel)[0],
                           os.path.join(out_dir, '{}.{}.png'.format(entry.name, label)))

    ordered_map(one, index.entries, cfg.run.threads)
    write_config(cfg, out_dir)
    print('preprocessed {} images into {}'.format(len(index), out_dir))
    return 0


def _train(cfg, net_cfg, ts, out_dir, resume=None):
    ckpt = train_loop(ts, cfg.train_config(), net_cfg, cfg.loss, out_dir=out_dir, resume=resume)
    plot_loss(read_run_log(os.path.join(out_dir, RUN_LOG))[:2],
              path=os.path.join(out_dir, 'loss.png'))
    return ckpt


def cmd_train(cfg, resume=None):
    out_dir = _out(cfg, 'train')
    index = index_dataset(cfg.run.dataset_root, 'train')
    ts = build_training_set(index, cfg.preprocess, threads=cfg.run.threads)
    write_config(cfg, out_dir)
    ckpt = _train(cfg, cfg.network, ts, out_dir, resume)
    print('trained {} iterations, final loss {}'.format(
        ckpt.iteration, ckpt.history['loss'][-1] if len(ckpt.history) else 'n/a'))
    return 0


def _infer(cfg, net_cfg, ckpt, index, out_dir):
    for entry in index:
        img = load_image(entry.image, entry.fov)
        img.name = entry.name
        tri = predict_full(img, ckpt, net_cfg, cfg.preprocess, cfg.infer, cfg.run.threads,
                           root=cfg.run.dataset_root)
        write_prediction(out_dir, tri, cfg.infer.threshold, cfg.infer.stride,
                         net_cfg.config_hash())


def cmd_infer(cfg, checkpoint=None, split='test'):
    checkpoint = checkpoint or _out(cfg, 'train', 'final.ckpt')
    ckpt = load_checkpoint(checkpoint, cfg.network)
    index = index_dataset(cfg.run.dataset_root, _split(split))
    out_dir = _out(cfg, 'predictions')
    _infer(cfg, cfg.network, ckpt, index, out_dir)
    write_config(cfg, out_dir)
    print('wrote predictions of {} images to {}'.format(len(index), out_dir))
    return 0


def _evaluate(cfg, index, pred_dir, eval_cfg=None, panels_dir=None):
    def one(entry):
        img, gt = load_entry(entry)
        tri = read_prediction(prediction_paths(pred_dir, entry.name)['npz'])
        if panels_dir is not None:
            plot_panels(img, gt, tri, cfg.eval.threshold,
                        os.path.join(panels_dir, entry.name + '.png'))
        return tri, gt, img.fov

    if panels_dir is not None:
        os.makedirs(panels_dir, exist_ok=True)
    # figures are drawn on the calling thread
    items = ordered_map(one, index.entries, 1 if panels_dir else cfg.run.threads)
    return evaluate_dataset(items, eval_cfg or cfg.eval, cfg.run.threads)


def cmd_eval(cfg, split='test', panels=False):
    index = index_dataset(cfg.run.dataset_root, _split(split))
    pred_dir = _out(cfg, 'predictions')
    out_dir = _out(cfg, 'eval')
    hashes = set()
    for entry in index:
        sidecar = prediction_paths(pred_dir, entry.name)['sidecar']
        if not os.path.isfile(sidecar):
            raise CheckpointError('no prediction for {} in {}'.format(entry.name, pred_dir))
        hashes.add(read_sidecar(sidecar)['config_hash'])
    if len(hashes) > 1:
        raise CheckpointError('predictions in {} come from different networks'.format(pred_dir))

    evaluation = _evaluate(cfg, index, pred_dir,
                           panels_dir=os.path.join(out_dir, 'panels') if panels else None)
    write_reports(out_dir, evaluation, hashes.pop() if hashes else '')
    write_config(cfg, out_dir)
    seg = evaluation.seg
    print('vessel acc {:.4f} sen {:.4f} sp {:.4f} auc {:.4f}'.format(
        seg.acc, seg.sen, seg.sp, seg.auc))
    for mode, av in evaluation.av.items():
        print('A/V {} acc {:.4f} sen {:.4f} sp {:.4f}'.format(mode, av.acc, av.sen, av.sp))
    return 0


def _slug(label):
    return label.strip('+').replace('+', '_').lower()


def cmd_ablate(cfg):
    """train, predict and evaluate the four ablation variants"""

    root = cfg.run.dataset_root
    train_index = index_dataset(root, 'train')
    test_index = index_dataset(root, 'test')
    ts = build_training_set(train_index, cfg.preprocess, threads=cfg.run.threads)
    eval_cfg = replace(cfg.eval, modes=('gt_pixels',))
    out_dir = _out(cfg, 'ablation')
    write_config(cfg, out_dir)

    runs = []
    for label, net_cfg in ablation_configs(cfg.network).items():
        variant = os.path.join(out_dir, _slug(label))
        logger.info('ablation variant %s', label)
        ckpt = _train(cfg, net_cfg, ts, os.path.join(variant, 'train'))
        pred_dir = os.path.join(variant, 'predictions')
        _infer(cfg, net_cfg, ckpt, test_index, pred_dir)
        evaluation = _evaluate(cfg, test_index, pred_dir, eval_cfg)
        runs.append(AblationRun(label, net_cfg.config_hash(), tuple(test_index.names),
                                evaluation.seg, evaluation.av['gt_pixels']))

    table = ablation_report(runs)
    write_ablation(out_dir, table)
    print(table.text)
    return 0


def gradcheck_errors(seeds=1):
    """
    Largest relative errors of the operator suite and of the end-to-end
    network check over `seeds` seeds.

    Returns
    -------

    ops : dict
        op name -> max relative error

    network : float
    """

    ops = {}
    network = 0.
    for seed in range(seeds):
        for name, err in op_suite(seed).items():
            ops[name] = max(ops.get(name, 0.), err)
        network = max(network, max(network_grad_check(seed).values()))
    return ops, network


def cmd_gradcheck(cfg, seeds=20):
    ops, network = gradcheck_errors(seeds)
    failed = []
    for name, err in ops.items():
        tol = BATCHNORM_TOLERANCE if name.startswith('batchnorm') else OP_TOLERANCE
        print('op\t{}\t{:.3e}'.format(name, err))
        if not err < tol:
            failed.append(name)
    print('network\t{:.3e}'.format(network))
    if not network < NETWORK_TOLERANCE:
        failed.append('network')
    if failed:
        raise FloatingPointError('gradient check failed for {}'.format(', '.join(failed)))
    return 0
