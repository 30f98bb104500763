# Configuration file for the Sphinx documentation builder.
#
# For the full list of options see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))


# -- Project information -----------------------------------------------------

project = 'krylovium'
copyright = '2024-2026, the krylovium developers'
author = 'the krylovium developers'

try:
    from krylovium import __version__ as release
except ImportError:
    release = 'unknown'


# -- General configuration ---------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              "sphinx_automodapi.automodapi",
              "numpydoc",
]

numpydoc_show_class_members = False

templates_path = ['_templates']

exclude_patterns = []


# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'

html_static_path = ['_static']
