# -*- coding: utf-8 -*-
#
# VesselPy documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys
import os
import mock

# the compiled dependencies are mocked so autodoc can import vesselpy
MOCK_MODULES = ['numpy', 'numpy.random', 'numpy.lib', 'numpy.lib.stride_tricks',
                'scipy', 'scipy.ndimage', 'scipy.signal',
                'scipy.spatial', 'scipy.special', 'scipy.stats',
                'matplotlib', 'matplotlib.figure',
                'matplotlib.backends', 'matplotlib.backends.backend_agg',
                'PIL', 'PIL.Image', 'skimage', 'skimage.draw']
for mod_name in MOCK_MODULES:
    sys.modules[mod_name] = mock.Mock()

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath('../'))
import vesselpy

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.doctest',
    'numpydoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]
numpydoc_show_class_members = False

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'VesselPy'
copyright = '2026, the VesselPy developers'

# The short X.Y version.
version = vesselpy.__version__
# The full version, including alpha/beta/rc tags.
release = vesselpy.__version__

exclude_patterns = ['_build']

# If true, '()' will be appended to :func: etc. cross-reference text.
add_function_parentheses = False

pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinxdoc'
html_static_path = ['_static']
html_show_sourcelink = True
htmlhelp_basename = 'VesselPydoc'

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'vesselpy', 'VesselPy Documentation',
     ['the VesselPy developers'], 1)
]
