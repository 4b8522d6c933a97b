# -*- coding: utf-8 -*-
#
# fredholm_bvp documentation build configuration file.

import sys
import os
import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath('..'))
import fredholm_bvp

# to show docstrings from __init__(self)
autoclass_content = 'both'

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = ['.rst']
master_doc = 'index'

project = u'fredholm_bvp'
copyright = u'fredholm_bvp contributors'
author = u'fredholm_bvp contributors'

version = fredholm_bvp.__version__
release = fredholm_bvp.__version__

language = None
exclude_patterns = ['_build']
pygments_style = 'sphinx'
todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = "sphinx_rtd_theme"
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
htmlhelp_basename = 'fredholm_bvpdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, 'fredholm_bvp.tex', u'fredholm\\_bvp Documentation', author, 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'fredholm_bvp', u'fredholm_bvp Documentation', [author], 1)
]
