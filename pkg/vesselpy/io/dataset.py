# -*- coding: utf-8 -*-
"""VesselPy library.

Dataset directory indexing. A dataset root looks like::

    <root>/manifest.txt
    <root>/images/<name>.png
    <root>/labels/<name>.png
    <root>/fov/<name>.png        (optional per image)

`manifest.txt` holds one `name<TAB>split` line per image, split being
`train` or `test`. Blank lines and `#` comments are ignored.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from __future__ import absolute_import

from dataclasses import dataclass, field
import logging
import os
from typing import List, Optional

from vesselpy.common.errors import RasterError
from vesselpy.io.raster import load_image, load_label

logger = logging.getLogger(__name__)

SPLITS = ('train', 'test')
MANIFEST = 'manifest.txt'


@dataclass(frozen=True)
class DatasetEntry(object):
    """paths of one image with its label and optional fov mask"""

    name: str
    image: str
    label: str
    fov: Optional[str] = None


@dataclass
class DatasetIndex(object):
    """entries of one split of a dataset root"""

    root: str
    split: str
    entries: List[DatasetEntry] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def names(self):
        return [e.name for e in self.entries]


def read_manifest(root):
    """list of (name, split) pairs from `<root>/manifest.txt`"""

    path = os.path.join(str(root), MANIFEST)
    try:
        with open(path) as f:
            lines = f.read().splitlines()
    except FileNotFoundError as e:
        raise RasterError(path, 'manifest not found') from e

    rows = []
    for lineno, line in enumerate(lines, 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in SPLITS:
            raise ValueError('{}:{}: expected "name<TAB>train|test", got {!r}'.format(
                path, lineno, line))
        rows.append((parts[0], parts[1]))
    return rows


def write_manifest(root, rows):
    """write (name, split) pairs to `<root>/manifest.txt`"""

    with open(os.path.join(str(root), MANIFEST), 'w') as f:
        for name, split in rows:
            if split not in SPLITS:
                raise ValueError('split must be train or test, got {}'.format(split))
            f.write('{}\t{}\n'.format(name, split))


def index_dataset(root, split='train'):
    """
    Build the DatasetIndex of one split.

    Parameters
    ----------

    root : str
        dataset root

    split : str or None, default='train'
        'train', 'test', or None for every manifest entry

    Returns
    -------

    index : DatasetIndex

    Raises
    ------

    RasterError
        a listed image or label file does not exist
    """

    if split is not None and split not in SPLITS:
        raise ValueError('split must be train, test or None, got {}'.format(split))

    root = str(root)
    entries = []
    for name, tag in read_manifest(root):
        if split is not None and tag != split:
            continue
        image = os.path.join(root, 'images', name + '.png')
        label = os.path.join(root, 'labels', name + '.png')
        fov = os.path.join(root, 'fov', name + '.png')
        for path in (image, label):
            if not os.path.isfile(path):
                raise RasterError(path, 'listed in manifest but missing')
        entries.append(DatasetEntry(name, image, label,
                                    fov if os.path.isfile(fov) else None))

    logger.debug('indexed %d %s images under %s', len(entries), split or 'all', root)
    return DatasetIndex(root, split or 'all', entries)


def load_entry(entry, strict=True):
    """load (FundusImage, LabelTriMap) of a DatasetEntry"""

    img = load_image(entry.image, fov_path=entry.fov)
    img.name = entry.name
    return img, load_label(entry.label, strict=strict)
