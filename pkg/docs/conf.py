# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.

# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath('../'))


# -- Project information -----------------------------------------------------

project = 'reviewgraph'
copyright = '2026, the reviewgraph developers'
author = 'the reviewgraph developers'

version = '0.1'
release = '0.1.0'


# -- General configuration ---------------------------------------------------

extensions = [
    'matplotlib.sphinxext.plot_directive',
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.todo',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.githubpages',
    'sphinx.ext.inheritance_diagram',
]

plot_html_show_source_link = False
napoleon_include_init_with_doc = True
add_module_names = False

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'


# -- Options for HTML output -------------------------------------------------

html_theme = 'bizstyle'
html_static_path = []
html_sidebars = {
    '**': [
        'globaltoc.html',
        'relations.html',
        'sourcelink.html',
        'searchbox.html',
    ]
}
html_short_title = 'reviewgraph: Debate Graphs for Paper Decisions'
htmlhelp_basename = 'reviewgraphdoc'


# -- Options for LaTeX, manual page and Texinfo output -----------------------

latex_documents = [
    (master_doc, 'reviewgraph.tex', 'reviewgraph Documentation', author,
     'manual'),
]

man_pages = [
    (master_doc, 'reviewgraph', 'reviewgraph Documentation', [author], 1)
]

texinfo_documents = [
    (master_doc, 'reviewgraph', 'reviewgraph Documentation', author,
     'reviewgraph', 'Reviewer-author debate graphs and a heterogeneous graph '
     'transformer for paper decision prediction.', 'Miscellaneous'),
]


# -- Extension configuration -------------------------------------------------

todo_include_todos = True

numfig = True
numfig_format = {'figure': 'Figure %s', 'table': 'Table %s',
                 'code-block': 'Listing %s', 'section': 'Section %s'}
numfig_secnum_depth = 1
