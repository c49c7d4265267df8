# -*- coding: utf-8 -*-
"""VesselPy library.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

import numpy as np
from numpy.random import default_rng
import pytest

from vesselpy.common.errors import EmptyEvaluationError
from vesselpy.evaluation import (roc_auc, seg_metrics, av_metrics, skeletal_av_metrics,
                                 summarize, SegReport)
from vesselpy.inference import AVDecision, TriProbMap, decide_av, skeletonize
from vesselpy.io import LabelTriMap


def _pairwise_auc(scores, labels):
    pos, neg = scores[labels], scores[~labels]
    diff = pos[:, None] - neg[None, :]
    return (np.sum(diff > 0) + 0.5 * np.sum(diff == 0)) / (len(pos) * len(neg))


def test_auc_matches_pairwise_oracle():
    rng = default_rng(0)
    for _ in range(100):
        scores = rng.integers(0, 50, 1000) / 50.
        labels = rng.random(1000) < rng.uniform(0.1, 0.9)
        assert abs(roc_auc(scores, labels) - _pairwise_auc(scores, labels)) < 1e-12


def test_auc_simple():
    assert roc_auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.
    assert roc_auc([0.5] * 6, [0, 1, 0, 1, 1, 0]) == 0.5
    assert roc_auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75


def test_auc_monotone_invariance():
    rng = default_rng(1)
    scores = rng.random(500)
    labels = rng.random(500) < 0.3
    a = roc_auc(scores, labels)
    for f in (lambda s: np.exp(4 * s), lambda s: s ** 3, lambda s: 10 * s - 7):
        assert abs(roc_auc(f(scores), labels) - a) < 1e-12


def test_auc_single_class():
    with pytest.raises(ValueError):
        roc_auc([0.1, 0.2], [1, 1])
    with pytest.raises(ValueError):
        roc_auc([0.1, 0.2], [0, 0])


def _seg_case():
    truth = np.zeros(1000, dtype=bool)
    truth[:100] = True
    prob = np.full(1000, 0.1)
    prob[:70] = 0.9
    prob[100:120] = 0.9
    return prob.reshape(10, 100), truth.reshape(10, 100)


def test_seg_counts():
    prob, truth = _seg_case()
    r = seg_metrics(prob, truth)
    assert (r.tp, r.fn, r.tn, r.fp) == (70, 30, 880, 20)
    assert abs(r.sen - 0.7) < 1e-12
    assert abs(r.sp - 880 / 900) < 1e-12
    assert abs(r.acc - 0.95) < 1e-12
    assert r.undefined == ()


def test_seg_perfect():
    _, truth = _seg_case()
    r = seg_metrics(truth.astype(float), LabelTriMap(truth, np.zeros_like(truth),
                                                     np.zeros_like(truth)))
    assert r.acc == r.sen == r.sp == r.auc == 1.


def test_seg_uninformative():
    _, truth = _seg_case()
    assert seg_metrics(np.full(truth.shape, 0.5), truth).auc == 0.5


def test_seg_counts_cover_fov():
    rng = default_rng(2)
    for _ in range(20):
        prob = rng.random((30, 40))
        truth = rng.random((30, 40)) < 0.2
        fov = rng.random((30, 40)) < 0.7
        r = seg_metrics(prob, truth, fov, threshold=rng.uniform(0.1, 0.9))
        assert r.n == fov.sum()


def test_seg_threshold_inclusive():
    truth = np.array([[True, False]])
    r = seg_metrics(np.array([[0.5, 0.49]]), truth)
    assert r.tp == 1 and r.tn == 1


def test_seg_no_vessels():
    truth = np.zeros((4, 4), dtype=bool)
    with pytest.warns(RuntimeWarning):
        r = seg_metrics(np.zeros((4, 4)), truth)
    assert np.isnan(r.sen) and np.isnan(r.auc)
    assert 'sen' in r.undefined and 'auc' in r.undefined
    assert r.sp == 1. and r.acc == 1.


def test_seg_empty_fov():
    with pytest.raises(EmptyEvaluationError):
        seg_metrics(np.zeros((3, 3)), np.ones((3, 3), dtype=bool), np.zeros((3, 3), dtype=bool))


def _av_case():
    """10 arteries, 8 called artery; 10 veins, 9 called vein"""
    artery = np.zeros((1, 20), dtype=bool)
    artery[0, :10] = True
    vein = ~artery
    gt = LabelTriMap(np.ones((1, 20), dtype=bool), artery, vein)
    pa = np.where(artery, 0.8, 0.2)
    pa[0, [0, 1, 10]] = np.array([0.2, 0.3, 0.9])
    tri = TriProbMap(np.ones((1, 20)), pa, 1. - pa, np.ones((1, 20), dtype=int))
    return gt, tri


def test_av_hand_example():
    gt, tri = _av_case()
    r = av_metrics(None, tri, gt, 'gt_pixels')
    assert (r.tp, r.fn, r.tn, r.fp) == (8, 2, 9, 1)
    assert abs(r.sen - 0.8) < 1e-12
    assert abs(r.sp - 0.9) < 1e-12
    assert abs(r.acc - 0.85) < 1e-12
    assert r.mode == 'gt_pixels' and r.n == 20


def test_av_perfect():
    gt, _ = _av_case()
    dec = AVDecision(gt.vessel, gt.artery, gt.vein, 'gt_pixels')
    r = av_metrics(dec, None, gt, 'gt_pixels')
    assert r.acc == r.sen == r.sp == 1.


def test_av_detected_empty():
    gt, tri = _av_case()
    tri.vessel = np.zeros((1, 20))
    with pytest.raises(EmptyEvaluationError):
        av_metrics(decide_av(tri, 0.5, 'detected'), tri, gt, 'detected')


def test_av_detected_subset_and_scale():
    rng = default_rng(3)
    for _ in range(20):
        vessel = rng.random((20, 20)) < 0.5
        artery = vessel & (rng.random((20, 20)) < 0.5)
        uncertain = vessel & ~artery & (rng.random((20, 20)) < 0.2)
        gt = LabelTriMap(vessel, artery, vessel & ~artery & ~uncertain, uncertain)
        pv, pa, pb = rng.random((3, 20, 20))
        tri = TriProbMap(pv, pa, pb, np.ones((20, 20), dtype=int))

        full = av_metrics(None, tri, gt, 'gt_pixels')
        assert full.n == np.sum(gt.artery | gt.vein)
        det = av_metrics(decide_av(tri, 0.5, 'detected'), tri, gt, 'detected')
        assert det.n <= full.n

        scaled = TriProbMap(pv, pa * 3.7, pb * 3.7, tri.coverage)
        assert av_metrics(None, scaled, gt, 'gt_pixels').acc == full.acc


def test_av_ignores_uncertain():
    gt, tri = _av_case()
    gt = LabelTriMap(gt.vessel, gt.artery & ~np.eye(1, 20, 5, dtype=bool), gt.vein,
                     np.eye(1, 20, 5, dtype=bool))
    a = av_metrics(None, tri, gt)
    tri.artery[0, 5] = 0.
    b = av_metrics(None, tri, gt)
    assert a == b and a.n == 19


def _bar():
    vessel = np.zeros((7, 21), dtype=bool)
    vessel[2:5, 2:19] = True
    return LabelTriMap(vessel, vessel, np.zeros_like(vessel))


def test_skeletal_bar():
    gt = _bar()
    dec = AVDecision(gt.vessel, gt.vessel.copy(), np.zeros_like(gt.vessel), 'gt_pixels')
    with pytest.warns(RuntimeWarning):
        r = skeletal_av_metrics(dec, gt)
    assert r.acc == 1. and r.mode == 'skeletal'
    assert 0 < r.n < gt.vessel.sum()


def test_skeletal_half_relabelled():
    gt = _bar()
    sk = skeletonize(gt.vessel)
    rows, cols = np.nonzero(sk)
    n = len(rows)
    artery = gt.vessel.copy()
    order = np.argsort(cols)[:n // 2]
    artery[rows[order], cols[order]] = False
    dec = AVDecision(gt.vessel, artery, gt.vessel & ~artery, 'gt_pixels')
    with pytest.warns(RuntimeWarning):
        r = skeletal_av_metrics(dec, gt)
    assert r.n == n
    assert abs(r.acc - 0.5) <= 1. / n


def test_skeletal_empty():
    gt = LabelTriMap(np.zeros((5, 5), dtype=bool), np.zeros((5, 5), dtype=bool),
                     np.zeros((5, 5), dtype=bool))
    dec = AVDecision(gt.vessel, gt.artery, gt.vein)
    with pytest.raises(EmptyEvaluationError):
        skeletal_av_metrics(dec, gt)


def test_summarize():
    a = SegReport(0.9, 0.8, 1.0, 0.95, 8, 0, 90, 2, 'a')
    b = SegReport(0.7, np.nan, 0.7, np.nan, 0, 30, 70, 0, 'b', ('sen', 'auc'))
    s = summarize([a, b])
    assert abs(s.acc - 0.8) < 1e-12
    assert s.sen == 0.8 and s.auc == 0.95
    assert (s.tp, s.fp, s.tn, s.fn) == (8, 30, 160, 2)
    assert s.undefined == ()

    c = SegReport(0.5, np.nan, 0.5, np.nan, 0, 1, 1, 0, 'c', ('sen', 'auc'))
    assert summarize([c]).undefined == ('sen', 'auc')

    gt, tri = _av_case()
    with pytest.raises(ValueError):
        summarize([a, av_metrics(None, tri, gt)])
    with pytest.raises(EmptyEvaluationError):
        summarize([])
