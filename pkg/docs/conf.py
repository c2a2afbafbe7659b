#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# crystalwalk documentation build configuration file
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys
import os

# Get the project root dir, which is the parent dir of this
cwd = os.getcwd()
project_root = os.path.dirname(cwd)

# Insert the project root dir as the first element in the PYTHONPATH.
# This lets us ensure that the source package is imported, and that its
# version is used.
sys.path.insert(0, project_root)

import crystalwalk  # noqa: E402

# -- General configuration ---------------------------------------------

extensions = ["sphinx.ext.autodoc", "sphinx.ext.viewcode", "sphinx.ext.napoleon"]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

# General information about the project.
project = u"Crystalwalk"
copyright = u"2026, The Crystalwalk Developers"

version = crystalwalk.__version__
release = crystalwalk.__version__

exclude_patterns = ["_build"]
pygments_style = "sphinx"

# -- Options for HTML output -------------------------------------------

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
htmlhelp_basename = "crystalwalkdoc"

# -- Options for manual page output ------------------------------------

man_pages = [
    ("index", "crystalwalk", u"Crystalwalk Documentation", [u"The Crystalwalk Developers"], 1)
]
