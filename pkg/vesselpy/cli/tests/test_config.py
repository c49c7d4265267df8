# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import os
from typing import Optional, Tuple

import pytest

from vesselpy.cli import (RunConfig, CONFIG_ENV, format_config, parse_config_text, load_config,
                          write_config, apply_overrides, parse_value)
from vesselpy.common.errors import ConfigError


def test_default_round_trip():
    cfg = RunConfig()
    assert parse_config_text(format_config(cfg)) == cfg


def test_changed_round_trip():
    cfg = parse_config_text('\n'.join([
        'network.width = 8',
        'network.multitask = false',
        'preprocess.gabor_scales = 2.5, 3',
        'preprocess.background_sigma = 4.5',
        'eval.modes = gt_pixels, skeletal',
        'train.lr = 0.1',
        'loss.lam = 0',
    ]))
    assert cfg.network.width == 8 and not cfg.network.multitask
    assert cfg.preprocess.gabor_scales == (2.5, 3.)
    assert cfg.preprocess.background_sigma == 4.5
    assert cfg.eval.modes == ('gt_pixels', 'skeletal')
    assert cfg.loss.lam == 0.
    assert parse_config_text(format_config(cfg)) == cfg


def test_sections_and_dotted_keys_agree():
    a = parse_config_text('train.max_iter = 7\ninfer.stride = 12 # tiles\n')
    b = parse_config_text('# header\n[train]\nmax_iter = 7\n\n[infer]\nstride = 12\n')
    assert a == b
    assert a.train.max_iter == 7 and a.infer.stride == 12


def test_unknown_keys_rejected():
    for text in ('train.nope = 1', 'nope.width = 1', 'width = 3', '[nope]\nx = 1',
                 'train.seed = 3', 'train.patch_size = 32'):
        with pytest.raises(ConfigError):
            parse_config_text(text)


def test_bad_values_rejected():
    for text in ('network.width = wide', 'network.multitask = maybe', 'network.width = 0',
                 'infer.threshold = 1.5'):
        with pytest.raises(ConfigError):
            parse_config_text(text)


def test_derived_fields():
    cfg = apply_overrides(RunConfig(), [('run.seed', '5'), ('network.patch_size', '32')])
    train = cfg.train_config()
    assert train.seed == 5 and train.patch_size == 32
    assert cfg.synth_spec().seed == 5


def test_parse_value():
    assert parse_value('none', Optional[float]) is None
    assert parse_value('1.5', Optional[float]) == 1.5
    assert parse_value('1, 3,5', Tuple[int, ...]) == (1, 3, 5)
    assert parse_value('Yes', bool) is True
    with pytest.raises(ValueError):
        parse_value('2', bool)


def test_load_config(tmp_path, monkeypatch):
    path = tmp_path / 'run.cfg'
    path.write_text('run.threads = 3\n')
    assert load_config(str(path)).run.threads == 3

    monkeypatch.setenv(CONFIG_ENV, str(path))
    assert load_config().run.threads == 3
    monkeypatch.delenv(CONFIG_ENV)
    assert load_config() == RunConfig()

    with pytest.raises(ConfigError):
        load_config(str(tmp_path / 'missing.cfg'))


def test_write_config(tmp_path):
    cfg = apply_overrides(RunConfig(), [('network.sigma', '0.5')])
    path = write_config(cfg, str(tmp_path / 'out'))
    assert os.path.basename(path) == 'config.txt'
    assert load_config(path) == cfg
