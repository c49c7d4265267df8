# -*- coding: utf-8 -*-
"""VesselPy library.

Diagnostic figures: the training loss curve and the image / ground truth
/ prediction / activation panel of one image.

Figures are drawn on an Agg canvas so no display is needed.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import, division

import logging

import numpy as np

from vesselpy.io.raster import overlay_colors
from vesselpy.inference.decision import decide_av

logger = logging.getLogger(__name__)


def _figure(figsize):
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    fig = Figure(figsize=figsize)
    FigureCanvasAgg(fig)
    return fig


def _history_arrays(history):
    if hasattr(history, 'keys') and 'loss' in history.keys:
        return np.asarray(history['iteration']), np.asarray(history['loss'])
    its, losses = history[0], history[1]
    return np.asarray(its), np.asarray(losses)


def plot_loss(history, ax=None, path=None, label=None):
    """
    Plot training loss against iteration on a log scale.

    Parameters
    ----------

    history : Saver or (iterations, losses)
        the `history` of a trained Checkpoint, or arrays such as those
        returned by `read_run_log`

    ax : matplotlib axes object, optional
        If provided, the axes to draw on, otherwise a new figure is made.

    path : str, optional
        save the figure as PNG

    label : str, optional
        label for the legend

    Returns
    -------
        axis of plot
    """

    if ax is None:
        ax = _figure((6, 4)).add_subplot(111)

    its, losses = _history_arrays(history)
    ax.plot(its, losses, label=label)
    if len(losses) and np.all(losses > 0):
        ax.set_yscale('log')
    ax.set_xlabel('iteration')
    ax.set_ylabel('loss')
    if label is not None:
        ax.legend()
    if path is not None:
        ax.figure.savefig(str(path))
        logger.debug('wrote %s', path)
    return ax


def plot_panels(img, gt, tri, threshold=0.5, path=None):
    """
    Side by side panels of one image: the RGB image, the ground truth
    artery/vein labels, the vessel probability, the artery/vein decision
    and the spatial activation map.

    Parameters
    ----------

    img : FundusImage

    gt : LabelTriMap or None

    tri : TriProbMap

    threshold : float, default=0.5

    path : str, optional
        save the figure as PNG

    Returns
    -------

    fig : matplotlib Figure
    """

    panels = [('image', img.rgb, None)]
    if gt is not None:
        panels.append(('ground truth', overlay_colors(gt), None))
    panels.append(('vessel probability', tri.vessel, 'gray'))
    panels.append(('artery / vein', overlay_colors(decide_av(tri, threshold, 'detected')), None))
    if tri.activation is not None:
        panels.append(('activation', tri.activation, 'viridis'))

    fig = _figure((3 * len(panels), 3.3))
    for i, (title, data, cmap) in enumerate(panels, start=1):
        ax = fig.add_subplot(1, len(panels), i)
        if cmap is None:
            ax.imshow(data)
        else:
            ax.imshow(data, cmap=cmap, vmin=0., vmax=1.)
        ax.set_title(title, fontsize=9)
        ax.set_axis_off()
    fig.tight_layout()
    if path is not None:
        fig.savefig(str(path))
        logger.debug('wrote %s', path)
    return fig
