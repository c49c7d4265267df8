# -*- coding: utf-8 -*-
# pylint: disable=invalid-name, too-many-arguments

"""VesselPy library.

Vessel segmentation and artery/vein classification metrics.

Segmentation is scored over the field of view against `gt.vessel`
(uncertain pixels count as vessel). Artery/vein classification takes
arteries as positives and veins as negatives, so sensitivity is artery
recall and specificity vein recall; uncertain pixels never count. Three
pixel sets are supported:

* 'gt_pixels' : every ground truth artery or vein pixel
* 'detected'  : ground truth artery or vein pixels the network also
  detected as vessel
* 'skeletal'  : ground truth artery or vein pixels on the centerlines of
  the ground truth vessel mask

Ratios with a zero denominator are NaN, flagged in the report's
`undefined` field and warned about.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass
import logging
from typing import Tuple
import warnings

import numpy as np
from scipy.stats import rankdata

from vesselpy.common.errors import EmptyEvaluationError, ShapeError
from vesselpy.common.helpers import pretty_str
from vesselpy.inference.decision import decide_av, skeletonize

logger = logging.getLogger(__name__)

AV_EVAL_MODES = ('gt_pixels', 'detected', 'skeletal')


def _ratio(num, den, name, undefined):
    if den == 0:
        undefined.append(name)
        return np.nan
    return num / den


@dataclass(frozen=True)
class SegReport(object):
    """
    Vessel segmentation scores of one image, or a dataset summary.

    acc = (TP + TN) / (TP + TN + FP + FN), sen = TP / (TP + FN),
    sp = TN / (TN + FP). `undefined` names the fields that are NaN
    because their denominator is zero.
    """

    acc: float
    sen: float
    sp: float
    auc: float
    tp: int
    fp: int
    tn: int
    fn: int
    name: str = ''
    undefined: Tuple[str, ...] = ()

    @property
    def n(self):
        return self.tp + self.fp + self.tn + self.fn

    def as_dict(self):
        return {'acc': self.acc, 'sen': self.sen, 'sp': self.sp, 'auc': self.auc}

    def __repr__(self):
        return '\n'.join([
            'SegReport object',
            pretty_str('name', self.name),
            pretty_str('acc', self.acc),
            pretty_str('sen', self.sen),
            pretty_str('sp', self.sp),
            pretty_str('auc', self.auc),
            pretty_str('TP FP TN FN', (self.tp, self.fp, self.tn, self.fn)),
        ])


@dataclass(frozen=True)
class AVReport(object):
    """
    Artery/vein classification scores with arteries as positives.

    tp: arteries called artery, fn: arteries not called artery,
    tn: veins called vein, fp: veins not called vein.
    """

    acc: float
    sen: float
    sp: float
    tp: int
    fp: int
    tn: int
    fn: int
    mode: str
    name: str = ''
    undefined: Tuple[str, ...] = ()

    @property
    def n(self):
        """number of evaluated pixels"""
        return self.tp + self.fp + self.tn + self.fn

    def as_dict(self):
        return {'acc': self.acc, 'sen': self.sen, 'sp': self.sp}

    def __repr__(self):
        return '\n'.join([
            'AVReport object',
            pretty_str('name', self.name),
            pretty_str('mode', self.mode),
            pretty_str('acc', self.acc),
            pretty_str('sen', self.sen),
            pretty_str('sp', self.sp),
            pretty_str('pixels', self.n),
        ])


def roc_auc(scores, labels):
    """
    Area under the ROC curve.

    Computed as the Mann-Whitney statistic with tied scores counting one
    half, which equals the trapezoidal area under the ROC traced through
    every distinct score threshold.

    Parameters
    ----------

    scores : array_like
        real scores, higher means positive

    labels : array_like of bool

    Returns
    -------

    auc : float

    Raises
    ------

    ValueError
        labels hold a single class

    Examples
    --------

    >>> roc_auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])
    0.75
    """

    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels, dtype=bool).ravel()
    if scores.shape != labels.shape:
        raise ShapeError('scores {} and labels {} differ in length'.format(
            scores.shape, labels.shape))

    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError('roc_auc needs both positive and negative labels')

    ranks = rankdata(scores)
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.
    return float(u / (n_pos * n_neg))


def _vessel_truth(gt):
    return np.asarray(gt.vessel if hasattr(gt, 'vessel') else gt, dtype=bool)


def seg_metrics(prob, gt, fov=None, threshold=0.5, name=''):
    """
    Vessel segmentation metrics over the field of view.

    Parameters
    ----------

    prob : ndarray (H, W)
        vessel probabilities

    gt : LabelTriMap or boolean ndarray (H, W)

    fov : boolean ndarray (H, W), optional
        pixels to score; everything when None

    threshold : float, default=0.5
        vessel iff prob >= threshold

    Returns
    -------

    report : SegReport
        TP + FP + TN + FN equals the number of FOV pixels. Sensitivity
        (and AUC) of a ground truth without vessels are NaN and flagged.

    Raises
    ------

    EmptyEvaluationError
        the field of view is empty
    """

    prob = np.asarray(prob, dtype=np.float64)
    truth = _vessel_truth(gt)
    fov = np.ones(truth.shape, dtype=bool) if fov is None else np.asarray(fov, dtype=bool)
    if prob.shape != truth.shape or fov.shape != truth.shape:
        raise ShapeError('prediction {}, ground truth {} and FOV {} must share a shape'.format(
            prob.shape, truth.shape, fov.shape))
    if not fov.any():
        raise EmptyEvaluationError('empty field of view{}'.format(' in ' + name if name else ''))

    p, t = prob[fov], truth[fov]
    pred = p >= threshold
    tp = int(np.sum(pred & t))
    fp = int(np.sum(pred & ~t))
    tn = int(np.sum(~pred & ~t))
    fn = int(np.sum(~pred & t))

    undefined = []
    acc = (tp + tn) / (tp + fp + tn + fn)
    sen = _ratio(tp, tp + fn, 'sen', undefined)
    sp = _ratio(tn, tn + fp, 'sp', undefined)
    if t.all() or not t.any():
        undefined.append('auc')
        auc = np.nan
    else:
        auc = roc_auc(p, t)

    if undefined:
        warnings.warn('{} undefined for {}'.format(', '.join(undefined), name or 'image'),
                      RuntimeWarning)
    return SegReport(acc, sen, sp, auc, tp, fp, tn, fn, name, tuple(undefined))


def _av_report(pixels, gt, pred_artery, pred_vein, mode, name):
    """confusion counts of the A/V classification over `pixels`"""

    if not pixels.any():
        raise EmptyEvaluationError('no artery/vein pixels to evaluate in {} mode{}'.format(
            mode, ' for ' + name if name else ''))

    artery = gt.artery & pixels
    vein = gt.vein & pixels
    tp = int(np.sum(artery & pred_artery))
    fn = int(np.sum(artery & ~pred_artery))
    tn = int(np.sum(vein & pred_vein))
    fp = int(np.sum(vein & ~pred_vein))

    undefined = []
    acc = (tp + tn) / (tp + fp + tn + fn)
    sen = _ratio(tp, tp + fn, 'sen', undefined)
    sp = _ratio(tn, tn + fp, 'sp', undefined)
    if undefined:
        warnings.warn('{} undefined for {} in {} mode'.format(
            ', '.join(undefined), name or 'image', mode), RuntimeWarning)
    return AVReport(acc, sen, sp, tp, fp, tn, fn, mode, name, tuple(undefined))


def _labelled(gt, fov):
    pixels = (gt.artery | gt.vein) & ~gt.uncertain
    if fov is not None:
        pixels &= np.asarray(fov, dtype=bool)
    return pixels


def av_metrics(decisions, tri, gt, mode='gt_pixels', fov=None, threshold=0.5, name=''):
    """
    Artery/vein classification metrics.

    Parameters
    ----------

    decisions : AVDecision or None
        used for the vessel detections of 'detected' mode and, without
        `tri`, for the class of each pixel. Computed from `tri` at
        `threshold` when None.

    tri : TriProbMap or None
        when given, every pixel is classified artery iff
        p_artery >= p_vein

    gt : LabelTriMap

    mode : str, 'gt_pixels' or 'detected'

    fov : boolean ndarray, optional

    Returns
    -------

    report : AVReport

    Raises
    ------

    EmptyEvaluationError
        the evaluated pixel set is empty, e.g. 'detected' mode with no
        detected vessel
    """

    if mode not in AV_EVAL_MODES[:2]:
        raise ValueError('mode must be gt_pixels or detected, got {!r}'.format(mode))
    if decisions is None:
        if tri is None:
            raise ValueError('need decisions or probabilities')
        decisions = decide_av(tri, threshold, 'gt_pixels')
    if decisions.vessel.shape != gt.shape:
        raise ShapeError('decisions {} and ground truth {} differ in shape'.format(
            decisions.vessel.shape, gt.shape))

    pixels = _labelled(gt, fov)
    if mode == 'detected':
        pixels &= decisions.vessel

    if tri is not None:
        pred_artery = np.asarray(tri.artery) >= np.asarray(tri.vein)
        pred_vein = ~pred_artery
    else:
        pred_artery, pred_vein = decisions.artery, decisions.vein
    return _av_report(pixels, gt, pred_artery, pred_vein, mode, name)


def skeletal_av_metrics(decisions, gt, fov=None, name=''):
    """
    Artery/vein metrics on the centerlines of the ground truth vessels.

    The pixel set is skeletonize(gt.vessel) restricted to labelled
    artery and vein pixels. A centerline pixel the decisions leave
    unlabelled counts as misclassified.

    Returns
    -------

    report : AVReport
        with mode 'skeletal'

    Raises
    ------

    EmptyEvaluationError
        no labelled pixel lies on the skeleton
    """

    if decisions.vessel.shape != gt.shape:
        raise ShapeError('decisions {} and ground truth {} differ in shape'.format(
            decisions.vessel.shape, gt.shape))
    if not gt.vessel.any():
        raise EmptyEvaluationError('ground truth has no vessel pixels')
    pixels = skeletonize(gt.vessel) & _labelled(gt, fov)
    return _av_report(pixels, gt, decisions.artery, decisions.vein, 'skeletal', name)


def summarize(reports, name='mean'):
    """
    Dataset summary of per-image reports.

    Ratios are the mean of the per-image values, ignoring NaN; counts are
    summed. A ratio undefined for every image stays NaN.

    Parameters
    ----------

    reports : sequence of SegReport, or of AVReport of one mode

    Returns
    -------

    summary : SegReport or AVReport
    """

    reports = list(reports)
    if not reports:
        raise EmptyEvaluationError('nothing to summarize')
    kind = type(reports[0])
    if any(type(r) is not kind for r in reports):
        raise ValueError('cannot summarize mixed report types')

    fields = list(reports[0].as_dict())
    means, undefined = {}, []
    for f in fields:
        values = np.array([getattr(r, f) for r in reports], dtype=np.float64)
        if np.all(np.isnan(values)):
            undefined.append(f)
            means[f] = np.nan
        else:
            means[f] = float(np.nanmean(values))
    counts = {c: sum(getattr(r, c) for r in reports) for c in ('tp', 'fp', 'tn', 'fn')}

    if kind is SegReport:
        return SegReport(name=name, undefined=tuple(undefined), **means, **counts)

    modes = {r.mode for r in reports}
    if len(modes) != 1:
        raise ValueError('cannot summarize reports of modes {}'.format(sorted(modes)))
    return AVReport(mode=modes.pop(), name=name, undefined=tuple(undefined), **means, **counts)
