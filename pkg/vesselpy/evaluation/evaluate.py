# -*- coding: utf-8 -*-
"""VesselPy library.

Per-image and per-dataset evaluation of stitched predictions.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

from dataclasses import dataclass, field
import logging
from typing import Dict, List, Tuple

from vesselpy.common.errors import EmptyEvaluationError
from vesselpy.common.helpers import ordered_map, pretty_str
from vesselpy.evaluation.metrics import (AV_EVAL_MODES, AVReport, SegReport, av_metrics,
                                         seg_metrics, skeletal_av_metrics, summarize)
from vesselpy.inference.decision import decide_av

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvaluationConfig(object):
    """
    threshold : float, default=0.5
        vessel probability threshold

    modes : tuple of str
        artery/vein pixel sets to score, any of AV_EVAL_MODES
    """

    threshold: float = 0.5
    modes: Tuple[str, ...] = AV_EVAL_MODES

    def __post_init__(self):
        if not 0 < self.threshold < 1:
            raise ValueError('threshold must be in (0, 1), got {}'.format(self.threshold))
        unknown = set(self.modes) - set(AV_EVAL_MODES)
        if unknown or not self.modes:
            raise ValueError('modes must be a non-empty subset of {}, got {}'.format(
                AV_EVAL_MODES, self.modes))


@dataclass
class ImageEvaluation(object):
    """segmentation report and A/V reports by mode of one image"""

    name: str
    seg: SegReport
    av: Dict[str, AVReport] = field(default_factory=dict)


@dataclass
class DatasetEvaluation(object):
    """per-image evaluations and their summaries"""

    images: List[ImageEvaluation]
    seg: SegReport
    av: Dict[str, AVReport]

    def __repr__(self):
        return '\n'.join([
            'DatasetEvaluation object',
            pretty_str('images', [e.name for e in self.images]),
            pretty_str('seg', self.seg.as_dict()),
            pretty_str('av', {m: r.as_dict() for m, r in self.av.items()}),
        ])


def evaluate_image(tri, gt, fov=None, cfg=EvaluationConfig()):
    """
    Score one prediction in every configured mode.

    A mode whose pixel set is empty for this image (typically 'detected'
    with nothing detected) is logged and left out of `av`.

    Parameters
    ----------

    tri : TriProbMap

    gt : LabelTriMap

    fov : boolean ndarray, optional

    cfg : EvaluationConfig

    Returns
    -------

    evaluation : ImageEvaluation
    """

    name = tri.name
    seg = seg_metrics(tri.vessel, gt, fov, cfg.threshold, name)
    av = {}
    for mode in cfg.modes:
        try:
            if mode == 'skeletal':
                av[mode] = skeletal_av_metrics(decide_av(tri, cfg.threshold, 'gt_pixels'), gt,
                                               fov, name)
            else:
                av[mode] = av_metrics(decide_av(tri, cfg.threshold, mode), tri, gt, mode, fov,
                                      cfg.threshold, name)
        except EmptyEvaluationError as e:
            logger.warning('%s: %s', name or 'image', e)
    return ImageEvaluation(name, seg, av)


def evaluate_dataset(items, cfg=EvaluationConfig(), threads=1):
    """
    Evaluate many images and summarize them.

    Parameters
    ----------

    items : iterable of (TriProbMap, LabelTriMap, fov or None)

    cfg : EvaluationConfig

    threads : int
        images are scored in parallel; the result does not depend on it

    Returns
    -------

    evaluation : DatasetEvaluation
        the summary of a mode covers the images that could be scored in it
    """

    images = ordered_map(lambda item: evaluate_image(item[0], item[1], item[2], cfg),
                         items, threads)
    if not images:
        raise EmptyEvaluationError('no images to evaluate')

    seg = summarize([e.seg for e in images])
    av = {}
    for mode in cfg.modes:
        reports = [e.av[mode] for e in images if mode in e.av]
        if reports:
            av[mode] = summarize(reports)
    logger.info('evaluated %d images: vessel acc %.4f', len(images), seg.acc)
    return DatasetEvaluation(images, seg, av)
