#

import os
import sys

sys.path.insert(0, os.path.abspath("../../"))

import twomode
from twomode.reports.svg import PALETTE

project = "twomode"
description = "entangled number states of two bosonic modes in a truncated Fock space"
copyright = "2026, twomode contributors"
version = release = twomode.__version__

html_title = f"{project} <small><b style='color: var(--color-brand-primary)'>{{{release}}}</b></small>"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosectionlabel",
    "sphinx.ext.autosummary",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinxext.opengraph",
    "sphinxcontrib.programoutput",
    "sphinx_copybutton",
    "sphinx_inline_tabs",
    "sphinx_paramlinks",
]

autodoc_default_options = {
    "members": True,
    "member-order": "bysource",
}

add_module_names = False
autoclass_content = "both"
autodoc_typehints_format = "short"
autosectionlabel_maxdepth = 3
autosectionlabel_prefix_document = True

html_theme = "furo"
html_theme_options = {
    # the curve colours of the svg reports
    "light_css_variables": {
        "color-brand-primary": PALETTE[0],
        "color-brand-content": PALETTE[3],
    },
    "dark_css_variables": {
        "color-brand-primary": PALETTE[4],
        "color-brand-content": PALETTE[2],
    },
}
highlight_language = "python3"

intersphinx_mapping = {
    "python": ("http://docs.python.org/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}
