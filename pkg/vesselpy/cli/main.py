# -*- coding: utf-8 -*-
"""VesselPy library.

Command line entry point::

    vesselpy synth --data data --seed 7
    vesselpy prep --data data --out runs
    vesselpy train --data data --out runs --set train.max_iter=500
    vesselpy infer --data data --out runs
    vesselpy eval --data data --out runs --panels
    vesselpy ablate --data data --out runs
    vesselpy gradcheck

Settings come from the defaults, then a config file (``--config`` or the
VESSELPY_CONFIG environment variable), then ``--set key=value`` pairs,
then the dedicated flags. Failures print one tab separated line
``error<TAB><exception class><TAB><message>`` to stderr and exit 1; usage
errors exit 2.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division, print_function

import argparse
import logging
import sys

from vesselpy import __version__
from vesselpy.cli import commands
from vesselpy.cli.config import apply_overrides, load_config
from vesselpy.common.errors import VesselPyError

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def _key_value(text):
    key, sep, value = text.partition('=')
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError('expected key=value, got {!r}'.format(text))
    return key.strip(), value.strip()


def _common(parser):
    parser.add_argument('--config', help='config file (default: $VESSELPY_CONFIG)')
    parser.add_argument('--set', dest='overrides', action='append', default=[],
                        type=_key_value, metavar='KEY=VALUE',
                        help='override one setting, e.g. train.max_iter=100')
    parser.add_argument('--data', help='dataset root (run.dataset_root)')
    parser.add_argument('--out', help='output root (run.output_root)')
    parser.add_argument('--seed', type=int, help='master seed (run.seed)')
    parser.add_argument('--threads', type=int, help='worker threads (run.threads)')
    parser.add_argument('--log-level', default='INFO',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])


def build_parser():
    parser = argparse.ArgumentParser(
        prog='vesselpy',
        description='Retinal vessel segmentation and artery/vein classification.')
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('synth', help='generate a synthetic fundus dataset')
    _common(p)
    p.add_argument('--count', type=int, help='number of images (synth.n_images)')

    p = sub.add_parser('prep', help='write enhanced channel cache and stack previews')
    _common(p)

    p = sub.add_parser('train', help='train the network')
    _common(p)
    p.add_argument('--max-iter', type=int, help='iterations (train.max_iter)')
    p.add_argument('--resume', help='checkpoint to continue from')

    p = sub.add_parser('infer', help='predict full images')
    _common(p)
    p.add_argument('--checkpoint', help='default: <out>/train/final.ckpt')
    p.add_argument('--split', default='test', choices=['train', 'test', 'all'])

    p = sub.add_parser('eval', help='score predictions against ground truth')
    _common(p)
    p.add_argument('--split', default='test', choices=['train', 'test', 'all'])
    p.add_argument('--panels', action='store_true', help='also draw per-image panels')

    p = sub.add_parser('ablate', help='train and score the four ablation variants')
    _common(p)
    p.add_argument('--max-iter', type=int, help='iterations per variant (train.max_iter)')

    p = sub.add_parser('gradcheck', help='64-bit finite difference gradient checks')
    _common(p)
    p.add_argument('--seeds', type=int, default=20, help='number of seeds')
    return parser


def effective_config(args):
    """RunConfig from defaults, config file, --set pairs and flags"""

    cfg = load_config(args.config)
    cfg = apply_overrides(cfg, args.overrides)
    flags = [('run.dataset_root', args.data), ('run.output_root', args.out),
             ('run.seed', args.seed), ('run.threads', args.threads),
             ('synth.n_images', getattr(args, 'count', None)),
             ('train.max_iter', getattr(args, 'max_iter', None))]
    return apply_overrides(cfg, [(k, str(v)) for k, v in flags if v is not None])


def _dispatch(args, cfg):
    if args.command == 'synth':
        return commands.cmd_synth(cfg)
    if args.command == 'prep':
        return commands.cmd_prep(cfg)
    if args.command == 'train':
        return commands.cmd_train(cfg, args.resume)
    if args.command == 'infer':
        return commands.cmd_infer(cfg, args.checkpoint, args.split)
    if args.command == 'eval':
        return commands.cmd_eval(cfg, args.split, args.panels)
    if args.command == 'ablate':
        return commands.cmd_ablate(cfg)
    return commands.cmd_gradcheck(cfg, args.seeds)


def run(argv=None):
    """
    Run one subcommand.

    Parameters
    ----------

    argv : list of str, optional
        arguments without the program name; sys.argv[1:] when None

    Returns
    -------

    code : int
        0 on success, 1 on a runtime failure, 2 on a usage error
    """

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code is None else int(e.code)

    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)
    try:
        cfg = effective_config(args)
        return _dispatch(args, cfg)
    except (VesselPyError, ValueError, OSError, ArithmeticError, RuntimeError) as e:
        logger.debug('command failed', exc_info=True)
        message = ' '.join(str(e).split())
        print('error\t{}\t{}'.format(type(e).__name__, message), file=sys.stderr)
        return 1


def main(argv=None):
    return run(argv)

