# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import os

import numpy as np
from numpy.random import default_rng
import pytest

from vesselpy.evaluation import (EvaluationConfig, evaluate_image, evaluate_dataset,
                                 write_reports, read_rows_tsv, ROW_FIELDS, AblationRun,
                                 ablation_report, write_ablation, METRIC_COLUMNS,
                                 plot_loss, plot_panels, SegReport, AVReport)
from vesselpy.inference import TriProbMap
from vesselpy.io import FundusImage, LabelTriMap

DO_PLOT = False


def _case(seed, name):
    rng = default_rng(seed)
    vessel = np.zeros((32, 32), dtype=bool)
    vessel[8:12, 2:30] = True
    vessel[20:23, 2:30] = True
    artery = np.zeros_like(vessel)
    artery[8:12] = vessel[8:12]
    gt = LabelTriMap(vessel, artery, vessel & ~artery)
    noise = rng.normal(0., 0.2, (3, 32, 32))
    tri = TriProbMap(np.clip(vessel + noise[0], 0, 1), np.clip(artery + noise[1], 0, 1),
                     np.clip((vessel & ~artery) + noise[2], 0, 1),
                     np.ones((32, 32), dtype=int), rng.random((32, 32)), name)
    return tri, gt


def test_evaluate_image_modes():
    tri, gt = _case(0, 'a')
    ev = evaluate_image(tri, gt)
    assert set(ev.av) == {'gt_pixels', 'detected', 'skeletal'}
    assert ev.av['detected'].n <= ev.av['gt_pixels'].n
    assert ev.av['skeletal'].n < ev.av['gt_pixels'].n
    assert ev.seg.n == 32 * 32
    assert ev.name == 'a'


def test_evaluate_image_skips_empty_mode():
    tri, gt = _case(1, 'b')
    tri.vessel = np.zeros((32, 32))
    ev = evaluate_image(tri, gt)
    assert 'detected' not in ev.av
    assert 'gt_pixels' in ev.av


def test_evaluation_config():
    with pytest.raises(ValueError):
        EvaluationConfig(threshold=1.5)
    with pytest.raises(ValueError):
        EvaluationConfig(modes=('centerline',))


def test_dataset_threads_and_summary():
    items = [_case(i, 'img{}'.format(i)) + (None,) for i in range(4)]
    a = evaluate_dataset(items)
    b = evaluate_dataset(items, threads=3)
    assert [e.seg for e in a.images] == [e.seg for e in b.images]
    assert a.seg == b.seg
    assert a.seg.tp == sum(e.seg.tp for e in a.images)
    assert abs(a.seg.acc - np.mean([e.seg.acc for e in a.images])) < 1e-12
    assert set(a.av) == {'gt_pixels', 'detected', 'skeletal'}


def test_write_reports(tmp_path):
    items = [_case(i, 'img{}'.format(i)) + (None,) for i in range(2)]
    ev = evaluate_dataset(items)
    text, rows = write_reports(str(tmp_path), ev, 'abc123')
    assert os.path.isfile(text)
    back = read_rows_tsv(rows)
    assert list(back[0]) == list(ROW_FIELDS)
    # two images and a summary for the vessel report and each of three modes
    assert len(back) == 4 * 3
    summary = [r for r in back if r['name'] == 'mean' and r['kind'] == 'vessel'][0]
    assert float(summary['acc']) == ev.seg.acc
    assert {r['mode'] for r in back if r['kind'] == 'av'} == {'gt_pixels', 'detected',
                                                              'skeletal'}
    assert all(r['config_hash'] == 'abc123' for r in back)


def _run(label, split=('a', 'b')):
    seg = SegReport(0.95, 0.8, 0.98, 0.97, 80, 20, 980, 20, 'mean')
    av = AVReport(0.9, 0.88, 0.92, 88, 8, 92, 12, 'gt_pixels', 'mean')
    return AblationRun(label, 'hash-' + label, split, seg, av)


def test_ablation_identical_runs(tmp_path):
    labels = ('baseline', '+MT', '+MT+MI', '+MT+MI+AC')
    table = ablation_report([_run(l) for l in labels])
    assert table.header[1:8] == METRIC_COLUMNS
    assert len(table.rows) == 4
    assert all(r[1:8] == table.rows[0][1:8] for r in table.rows)
    lines = table.text.splitlines()
    assert len(lines) == 6
    assert lines[2].split()[1:] == ['95.00', '80.00', '98.00', '97.00', '90.00', '88.00', '92.00']

    text, rows = write_ablation(str(tmp_path), table)
    back = read_rows_tsv(rows)
    assert [r['Method'] for r in back] == list(labels)
    assert float(back[3]['A/V Acc']) == 0.9


def test_ablation_mismatched_split():
    with pytest.raises(ValueError):
        ablation_report([_run('baseline'), _run('+MT', ('a', 'c'))])


def test_plots(tmp_path):
    tri, gt = _case(2, 'p')
    img = FundusImage(default_rng(2).random((32, 32, 3)), name='p')
    path = str(tmp_path / 'panels.png')
    fig = plot_panels(img, gt, tri, path=path)
    assert len(fig.axes) == 5
    assert os.path.isfile(path)

    its = np.arange(20)
    ax = plot_loss((its, np.exp(-its / 10.)), path=str(tmp_path / 'loss.png'))
    assert ax.get_yscale() == 'log'
    assert os.path.isfile(str(tmp_path / 'loss.png'))
    if DO_PLOT:
        fig.savefig('panels.png')
