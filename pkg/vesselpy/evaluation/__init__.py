# -*- coding: utf-8 -*-
"""VesselPy library.

Segmentation and artery/vein classification metrics, dataset
evaluation, report files, the ablation table and diagnostic plots.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from .metrics import (AV_EVAL_MODES, SegReport, AVReport, roc_auc, seg_metrics,
                      av_metrics, skeletal_av_metrics, summarize)
from .evaluate import (EvaluationConfig, ImageEvaluation, DatasetEvaluation,
                       evaluate_image, evaluate_dataset)
from .report import (REPORT_TEXT, REPORT_ROWS, ABLATION_TEXT, ABLATION_ROWS, ROW_FIELDS,
                     METRIC_COLUMNS, PUBLISHED_FULL_MODEL, report_row, evaluation_rows,
                     format_table, read_rows_tsv, write_reports, AblationRun,
                     AblationTable, ablation_report, write_ablation)
from .plots import plot_loss, plot_panels
