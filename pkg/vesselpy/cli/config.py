# -*- coding: utf-8 -*-
"""VesselPy library.

Run configuration: every parameter group of the package in one object,
read from and written to line oriented ``key = value`` text::

    # comments start with '#'
    train.max_iter = 500
    network.width = 8

    [infer]
    stride = 16

Keys are either dotted at the top of the file or grouped under a
``[section]``; both address the same field. Unknown sections and keys are
rejected. Tuples are comma separated lists, optional values accept
``none``.

The master seed and patch size live in ``run.seed`` and
``network.patch_size``; the training and synthesis configs follow them.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import configparser
from dataclasses import dataclass, field, fields, replace
import logging
import os
import typing

from vesselpy.cli.synth import SynthSpec
from vesselpy.common.errors import ConfigError
from vesselpy.evaluation.evaluate import EvaluationConfig
from vesselpy.inference.predict import InferenceConfig
from vesselpy.network.config import NetworkConfig
from vesselpy.preprocess.pipeline import PreprocessConfig
from vesselpy.training.config import LossWeights, TrainConfig

logger = logging.getLogger(__name__)

#: environment variable naming the default config file
CONFIG_ENV = 'VESSELPY_CONFIG'

CONFIG_FILE = 'config.txt'

_TOP = '__top__'


@dataclass(frozen=True)
class RunSettings(object):
    """
    dataset_root : str, default='data'

    output_root : str, default='runs'

    seed : int, default=0
        seeds network initialization, patch sampling and synthesis

    threads : int, default=1
        worker threads for per-image and per-tile work; outputs do not
        depend on it
    """

    dataset_root: str = 'data'
    output_root: str = 'runs'
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError('threads must be 1 or greater')


@dataclass(frozen=True)
class RunConfig(object):
    """All parameter groups, one per config section."""

    run: RunSettings = field(default_factory=RunSettings)
    synth: SynthSpec = field(default_factory=SynthSpec)
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    loss: LossWeights = field(default_factory=LossWeights)
    infer: InferenceConfig = field(default_factory=InferenceConfig)
    eval: EvaluationConfig = field(default_factory=EvaluationConfig)

    def train_config(self):
        """TrainConfig with the run seed and the network patch size"""
        return replace(self.train, seed=self.run.seed, patch_size=self.network.patch_size)

    def synth_spec(self):
        return replace(self.synth, seed=self.run.seed)


#: fields that are set from elsewhere and cannot be configured
_DERIVED = {'train': ('seed', 'patch_size'), 'synth': ('seed',)}


def _section_fields(section):
    cls = {f.name: f.type for f in fields(RunConfig)}[section]
    return {f.name: f.type for f in fields(cls) if f.name not in _DERIVED.get(section, ())}


def sections():
    return [f.name for f in fields(RunConfig)]


def _parse_bool(text):
    value = text.strip().lower()
    if value in ('1', 'true', 'yes', 'on'):
        return True
    if value in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('not a boolean: {!r}'.format(text))


def parse_value(text, kind):
    """convert config text to a value of the annotated field type `kind`"""

    origin = typing.get_origin(kind)
    args = typing.get_args(kind)
    if origin is typing.Union and type(None) in args:
        if text.strip().lower() == 'none':
            return None
        inner = [a for a in args if a is not type(None)][0]
        return parse_value(text, inner)
    if origin is tuple:
        items = [t.strip() for t in text.split(',') if t.strip()]
        return tuple(parse_value(t, args[0]) for t in items)
    if kind is bool:
        return _parse_bool(text)
    if kind in (int, float, str):
        return kind(text.strip())
    raise ValueError('unsupported field type {}'.format(kind))


def format_value(value):
    if value is None:
        return 'none'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, tuple):
        return ', '.join(format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def apply_overrides(cfg, overrides):
    """
    New RunConfig with dotted `section.key` -> text overrides applied.

    Raises
    ------

    ConfigError
        unknown section or key, unparsable value, or a value its config
        class rejects
    """

    grouped = {}
    for dotted, text in overrides:
        section, sep, key = dotted.strip().partition('.')
        if not sep or section not in sections():
            raise ConfigError('unknown config key {!r}'.format(dotted))
        known = _section_fields(section)
        if key not in known:
            raise ConfigError('unknown config key {!r}'.format(dotted))
        try:
            grouped.setdefault(section, {})[key] = parse_value(text, known[key])
        except ValueError as e:
            raise ConfigError('bad value {!r} for {}: {}'.format(text, dotted, e)) from e

    updates = {}
    for section, values in grouped.items():
        try:
            updates[section] = replace(getattr(cfg, section), **values)
        except (TypeError, ValueError) as e:
            raise ConfigError('invalid [{}] settings: {}'.format(section, e)) from e
    return replace(cfg, **updates)


def parse_config_text(text, base=None):
    """RunConfig from config text, on top of `base` (defaults if None)"""

    parser = configparser.ConfigParser(default_section='__defaults__',
                                       inline_comment_prefixes=('#',),
                                       interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string('[{}]\n'.format(_TOP) + text)
    except configparser.Error as e:
        raise ConfigError('cannot parse config: {}'.format(e)) from e

    overrides = []
    for section in parser.sections():
        if section == _TOP:
            overrides.extend(parser.items(section))
        elif section in sections():
            overrides.extend(('{}.{}'.format(section, k), v) for k, v in parser.items(section))
        else:
            raise ConfigError('unknown config section [{}]'.format(section))
    return apply_overrides(base or RunConfig(), overrides)


def load_config(path=None, base=None):
    """
    Read a config file. Without `path` the file named by the
    VESSELPY_CONFIG environment variable is read, if set.
    """

    if path is None:
        path = os.environ.get(CONFIG_ENV)
        if not path:
            return base or RunConfig()
    try:
        with open(str(path)) as f:
            text = f.read()
    except OSError as e:
        raise ConfigError('cannot read config {}: {}'.format(path, e)) from e
    logger.debug('read config %s', path)
    return parse_config_text(text, base)


def format_config(cfg):
    """the complete config as text that parses back to `cfg`"""

    lines = ['# vesselpy run configuration']
    for section in sections():
        lines.append('')
        lines.append('[{}]'.format(section))
        group = getattr(cfg, section)
        for name in _section_fields(section):
            lines.append('{} = {}'.format(name, format_value(getattr(group, name))))
    return '\n'.join(lines) + '\n'


def write_config(cfg, out_dir):
    """write `<out_dir>/config.txt`; returns its path"""

    os.makedirs(str(out_dir), exist_ok=True)
    path = os.path.join(str(out_dir), CONFIG_FILE)
    with open(path, 'w') as f:
        f.write(format_config(cfg))
    return path
