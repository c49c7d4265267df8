# -*- coding: utf-8 -*-
"""VesselPy library.

Report files: an aligned plain text table for people and a tab
separated rows file for programs, for both dataset evaluations and the
ablation study.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass
import logging
import os
from typing import List, Tuple

import numpy as np

from vesselpy.common.helpers import pretty_str
from vesselpy.evaluation.metrics import AVReport, SegReport

logger = logging.getLogger(__name__)

REPORT_TEXT = 'eval_report.txt'
REPORT_ROWS = 'eval_rows.tsv'
ABLATION_TEXT = 'ablation.txt'
ABLATION_ROWS = 'ablation.tsv'

ROW_FIELDS = ('name', 'kind', 'mode', 'acc', 'sen', 'sp', 'auc',
              'tp', 'fp', 'tn', 'fn', 'undefined', 'config_hash')

METRIC_COLUMNS = ('Vessel Acc', 'Vessel Sen', 'Vessel Sp', 'Vessel AUC',
                  'A/V Acc', 'A/V Sen', 'A/V Sp')

#: published full-model figures at full scale, for reference only; desk
#: scale runs on synthetic data are not expected to reach them
PUBLISHED_FULL_MODEL = {
    'Vessel Acc': 0.9570, 'Vessel Sen': 0.7916, 'Vessel Sp': 0.9811, 'Vessel AUC': 0.9810,
    'A/V Acc': 0.9258,
}


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return 'nan' if np.isnan(value) else '{:.4f}'.format(value)
    return str(value)


def report_row(report, config_hash=''):
    """dict of ROW_FIELDS for a SegReport or AVReport"""

    seg = isinstance(report, SegReport)
    return {
        'name': report.name,
        'kind': 'vessel' if seg else 'av',
        'mode': '-' if seg else report.mode,
        'acc': report.acc,
        'sen': report.sen,
        'sp': report.sp,
        'auc': report.auc if seg else np.nan,
        'tp': report.tp, 'fp': report.fp, 'tn': report.tn, 'fn': report.fn,
        'undefined': ','.join(report.undefined) or '-',
        'config_hash': config_hash or '-',
    }


def evaluation_rows(evaluation, config_hash=''):
    """rows of every per-image report followed by the summaries"""

    rows = []
    for reports in ([e.seg for e in evaluation.images], [evaluation.seg]):
        rows.extend(report_row(r, config_hash) for r in reports)
    for mode in evaluation.av:
        rows.extend(report_row(e.av[mode], config_hash) for e in evaluation.images
                    if mode in e.av)
        rows.append(report_row(evaluation.av[mode], config_hash))
    return rows


def format_table(header, rows):
    """left aligned columns separated by two spaces"""

    cells = [list(header)] + [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ['  '.join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, '  '.join('-' * w for w in widths))
    return '\n'.join(lines)


def format_rows_tsv(header, rows):
    lines = ['\t'.join(header)]
    for row in rows:
        lines.append('\t'.join(repr(v) if isinstance(v, float) else str(v) for v in row))
    return '\n'.join(lines) + '\n'


def read_rows_tsv(path):
    """rows file back as a list of dicts of strings"""

    with open(str(path)) as f:
        lines = [line.rstrip('\n') for line in f if line.strip()]
    header = lines[0].split('\t')
    return [dict(zip(header, line.split('\t'))) for line in lines[1:]]


def write_reports(out_dir, evaluation, config_hash=''):
    """
    Write REPORT_TEXT and REPORT_ROWS of a DatasetEvaluation.

    Returns
    -------

    paths : (str, str)
        text report and rows file
    """

    os.makedirs(str(out_dir), exist_ok=True)
    rows = evaluation_rows(evaluation, config_hash)
    table = [[r[f] for f in ROW_FIELDS[:-1]] for r in rows]

    text_path = os.path.join(str(out_dir), REPORT_TEXT)
    rows_path = os.path.join(str(out_dir), REPORT_ROWS)
    with open(text_path, 'w') as f:
        f.write('config hash: {}\n\n'.format(config_hash or '-'))
        f.write(format_table(ROW_FIELDS[:-1], table) + '\n')
    with open(rows_path, 'w') as f:
        f.write(format_rows_tsv(ROW_FIELDS, [[r[k] for k in ROW_FIELDS] for r in rows]))
    logger.info('wrote %s and %s', text_path, rows_path)
    return text_path, rows_path


@dataclass
class AblationRun(object):
    """dataset summaries of one trained ablation configuration"""

    label: str
    config_hash: str
    split: Tuple[str, ...]
    seg: SegReport
    av: AVReport

    def metrics(self):
        """values in METRIC_COLUMNS order"""
        return [self.seg.acc, self.seg.sen, self.seg.sp, self.seg.auc,
                self.av.acc, self.av.sen, self.av.sp]


@dataclass
class AblationTable(object):
    """the ablation grid as aligned text and as machine readable rows"""

    header: Tuple[str, ...]
    rows: List[list]
    text: str

    def __repr__(self):
        return '\n'.join(['AblationTable object', pretty_str('text', self.text)])


def ablation_report(runs):
    """
    Tabulate vessel and artery/vein metrics of the ablation runs.

    Parameters
    ----------

    runs : sequence of AblationRun
        usually the four configurations of `ablation_configs`, evaluated on
        the same test images

    Returns
    -------

    table : AblationTable
        one row per run: label, the seven METRIC_COLUMNS, the A/V mode and
        the config hash

    Raises
    ------

    ValueError
        the runs were evaluated on different test splits, or their A/V
        reports use different modes
    """

    runs = list(runs)
    if not runs:
        raise ValueError('no ablation runs')
    split = tuple(sorted(runs[0].split))
    for run in runs[1:]:
        if tuple(sorted(run.split)) != split:
            raise ValueError('run {} was evaluated on a different test split than {}'.format(
                run.label, runs[0].label))
    modes = {run.av.mode for run in runs}
    if len(modes) != 1:
        raise ValueError('ablation runs mix A/V modes {}'.format(sorted(modes)))

    header = ('Method',) + METRIC_COLUMNS + ('A/V mode', 'config_hash')
    rows = [[run.label] + run.metrics() + [run.av.mode, run.config_hash] for run in runs]

    # text shows percentages like a results table
    shown = [[r[0]] + ['nan' if np.isnan(v) else '{:.2f}'.format(100 * v) for v in r[1:8]]
             for r in rows]
    text = format_table(header[:8], shown)
    return AblationTable(header, rows, text)


def write_ablation(out_dir, table):
    """write ABLATION_TEXT and ABLATION_ROWS; returns both paths"""

    os.makedirs(str(out_dir), exist_ok=True)
    text_path = os.path.join(str(out_dir), ABLATION_TEXT)
    rows_path = os.path.join(str(out_dir), ABLATION_ROWS)
    with open(text_path, 'w') as f:
        f.write(table.text + '\n')
    with open(rows_path, 'w') as f:
        f.write(format_rows_tsv(table.header, table.rows))
    logger.info('wrote %s and %s', text_path, rows_path)
    return text_path, rows_path
