# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import os

from vesselpy.cli import run, load_config, build_parser
from vesselpy.evaluation import read_rows_tsv, REPORT_ROWS, ABLATION_ROWS
from vesselpy.network import ABLATION_LABELS

# tiny network and fast preprocessing for end to end runs
TINY = ['--set', 'network.width=4', '--set', 'network.patch_size=16',
        '--set', 'train.batch_size=2', '--set', 'train.log_every=1',
        '--set', 'train.checkpoint_every=0', '--set', 'infer.stride=16',
        '--set', 'preprocess.gabor_scales=2', '--set', 'preprocess.gabor_orientations=0,45,90,135',
        '--set', 'preprocess.line_window=7', '--set', 'preprocess.line_lengths=1,3,5,7',
        '--set', 'synth.height=96', '--set', 'synth.width=96']


def _files(root):
    out = {}
    for dirpath, _, names in os.walk(root):
        for name in names:
            with open(os.path.join(dirpath, name), 'rb') as f:
                out[os.path.relpath(os.path.join(dirpath, name), root)] = f.read()
    return out


def test_help(capsys):
    assert run(['eval', '--help']) == 0
    assert 'usage' in capsys.readouterr().out


def test_usage_errors(capsys):
    assert run(['frobnicate']) == 2
    assert run(['synth', '--no-such-flag']) == 2
    assert run([]) == 2
    capsys.readouterr()


def test_runtime_error_line(tmp_path, capsys):
    code = run(['infer', '--data', str(tmp_path), '--out', str(tmp_path / 'runs')])
    assert code == 1
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    fields = err[0].split('\t')
    assert fields[0] == 'error' and fields[1] == 'CheckpointError'


def test_bad_setting(tmp_path, capsys):
    assert run(['synth', '--data', str(tmp_path), '--set', 'synth.trees=lots']) == 1
    assert capsys.readouterr().err.split('\t')[1] == 'ConfigError'


def test_synth_reproducible(tmp_path, capsys):
    for d in ('a', 'b'):
        assert run(['synth', '--seed', '7', '--count', '2', '--data', str(tmp_path / d)]
                   + TINY) == 0
    a, b = _files(str(tmp_path / 'a')), _files(str(tmp_path / 'b'))
    # the saved config names its own dataset root
    assert a.pop('config.txt') != b.pop('config.txt')
    assert a == b
    assert load_config(str(tmp_path / 'a' / 'config.txt')).synth.n_images == 2
    capsys.readouterr()


def test_end_to_end(tmp_path, capsys):
    data, out = str(tmp_path / 'data'), str(tmp_path / 'runs')
    common = ['--data', data, '--out', out] + TINY

    assert run(['synth', '--count', '3'] + common) == 0
    assert run(['prep'] + common) == 0
    assert os.path.isfile(os.path.join(out, 'prep', 'synth_000.gabor.png'))
    assert os.path.isfile(os.path.join(data, 'cache', 'synth_000.line.png'))

    assert run(['train', '--max-iter', '2'] + common) == 0
    assert os.path.isfile(os.path.join(out, 'train', 'final.ckpt'))
    assert os.path.isfile(os.path.join(out, 'train', 'loss.png'))

    assert run(['infer'] + common) == 0
    assert os.path.isfile(os.path.join(out, 'predictions', 'synth_002.av.png'))

    assert run(['eval', '--panels'] + common) == 0
    rows = read_rows_tsv(os.path.join(out, 'eval', REPORT_ROWS))
    assert {r['name'] for r in rows} == {'synth_002', 'mean'}
    assert os.path.isfile(os.path.join(out, 'eval', 'panels', 'synth_002.png'))
    assert 'vessel acc' in capsys.readouterr().out

    # a checkpoint of another architecture is refused
    assert run(['infer'] + common + ['--set', 'network.width=8']) == 1
    assert 'ConfigHashMismatch' in capsys.readouterr().err


def test_ablate(tmp_path, capsys):
    data, out = str(tmp_path / 'data'), str(tmp_path / 'runs')
    common = ['--data', data, '--out', out] + TINY

    assert run(['synth', '--count', '3'] + common) == 0
    assert run(['ablate', '--max-iter', '2'] + common) == 0
    rows = read_rows_tsv(os.path.join(out, 'ablation', ABLATION_ROWS))
    assert [r['Method'] for r in rows] == list(ABLATION_LABELS)
    assert {r['A/V mode'] for r in rows} == {'gt_pixels'}
    assert len({r['config_hash'] for r in rows}) == 4
    for slug in ('baseline', 'mt', 'mt_mi', 'mt_mi_ac'):
        assert os.path.isdir(os.path.join(out, 'ablation', slug, 'predictions'))
    assert os.path.isfile(os.path.join(out, 'ablation', 'ablation.txt'))
    assert '+MT+MI+AC' in capsys.readouterr().out


def test_gradcheck(capsys):
    assert run(['gradcheck', '--seeds', '2']) == 0
    out = capsys.readouterr().out
    assert 'op\tconv2d\t' in out
    assert 'network\t' in out


def test_gradcheck_default_seeds():
    assert build_parser().parse_args(['gradcheck']).seeds == 20
