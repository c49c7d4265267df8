# -*- coding: utf-8 -*-
# pylint: disable=invalid-name

"""VesselPy library.

Small helpers used throughout the package: a history recorder for long
running loops, pretty printing for reprs, an order preserving thread map,
and the precision switch.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import print_function
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
import copy
import numpy as np


class Saver(object):
    """
    Records the public attributes of an object each time `save()` is
    called. The training loop uses it to keep the loss and learning rate
    history of a run; anything with a `__dict__` works.

    Attributes are appended to lists which are then reachable with either
    the [] syntax or the . operator.

    .. code-block:: Python

        progress = TrainingProgress()
        saver = Saver(progress)
        for it in range(n):
            progress.loss = step()
            saver.save()

        losses = saver['loss']
        saver.to_array()
        plt.plot(saver.iteration, saver.loss)

    Parameters
    ----------

    obj : object
        object whose attributes are recorded

    save_current : bool, default=False
        save the current state of `obj` when the saver is created

    ignore : tuple of str
        attribute names that are never recorded
    """

    def __init__(self, obj, save_current=False, ignore=()):
        self._obj = obj
        self._DL = defaultdict(list)
        self._ignore = tuple(ignore)
        self._len = 0

        if save_current:
            self.save()

    def save(self):
        """append the current public attributes of the object"""

        v = copy.deepcopy(self._obj.__dict__)
        for key in list(v.keys()):
            if key.startswith('_') or key in self._ignore or callable(v[key]):
                del v[key]

        for key in v:
            self._DL[key].append(v[key])

        self.__dict__.update(self._DL)
        self._len += 1

    def __getitem__(self, key):
        return self._DL[key]

    def __len__(self):
        return self._len

    @property
    def keys(self):
        """list of all recorded keys"""
        return list(self._DL.keys())

    def to_array(self):
        """
        Convert every recorded list to an np.array. Raises ValueError if a
        key holds values of varying shape.
        """
        for key in self.keys:
            try:
                self.__dict__[key] = np.array(self._DL[key])
            except ValueError:
                self.__dict__.update(self._DL)
                raise ValueError('could not convert {} into np.array'.format(key))

    def __repr__(self):
        return '<Saver object at {}\n  Keys: {}>'.format(
            hex(id(self)), ' '.join(self.keys))


def pretty_str(label, arr):
    """
    Generates a pretty printed value with an assignment, used to build the
    multi-line reprs of vesselpy objects. Arrays larger than 16 elements
    are summarized by shape and dtype instead of printed.

    Examples
    --------
    >>> print(pretty_str('stride', 10))
    stride = 10

    >>> print(pretty_str('vessel', np.zeros((584, 565))))
    vessel = <array shape=(584, 565) dtype=float64>
    """

    if label is None:
        label = ''
    if label:
        label += ' = '

    if isinstance(arr, np.ndarray) and arr.size > 16:
        return label + '<array shape={} dtype={}>'.format(arr.shape, arr.dtype)

    if isinstance(arr, (list, tuple)) and arr and isinstance(arr[0], np.ndarray):
        return '\n'.join(
            [pretty_str(label[:-3] + '[' + str(i) + ']', x) for (i, x) in enumerate(arr)])

    rows = str(arr).split('\n')
    s = label + rows[0]
    pad = ' ' * len(label)
    for line in rows[1:]:
        s = s + '\n' + pad + line
    return s


def ordered_map(fn, items, threads=1):
    """
    Apply `fn` to every item and return the results as a list in input
    order. With `threads` > 1 the calls run on a thread pool; the result
    list is identical either way.

    Parameters
    ----------

    fn : callable
        function of one argument

    items : iterable

    threads : int, default=1
        worker count; values below 2 run serially

    Returns
    -------

    results : list
    """

    items = list(items)
    if threads is None or threads < 2 or len(items) < 2:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=int(threads)) as pool:
        return list(pool.map(fn, items))


def float_dtype(precision):
    """
    Map a precision tag to a numpy float type.

    Parameters
    ----------

    precision : str or dtype
        'float32' / '32' or 'float64' / '64'

    Returns
    -------

    dtype : np.dtype
    """

    key = str(np.dtype(precision) if not isinstance(precision, str) else precision)
    if key in ('float32', '32', 'single'):
        return np.dtype(np.float32)
    if key in ('float64', '64', 'double'):
        return np.dtype(np.float64)
    raise ValueError('precision must be float32 or float64, got {}'.format(precision))
