# coding: utf-8


import sys
import os


thisdir = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.dirname(thisdir))

import mmho


project = mmho.__name__
author = mmho.__author__
copyright = mmho.__copyright__
copyright = copyright[10:] if copyright.startswith("Copyright ") else copyright
version = mmho.__version__[:mmho.__version__.index(".", 2)]
release = mmho.__version__
language = "en"

templates_path = ["_templates"]
html_static_path = []
master_doc = "index"
source_suffix = ".rst"
exclude_patterns = []
pygments_style = "sphinx"
add_module_names = False

html_title = "{} v{}".format(project, version)
html_theme = "sphinx_book_theme"
html_theme_options = {}
if html_theme == "sphinx_rtd_theme":
    html_theme_options.update({
        "prev_next_buttons_location": None,
        "collapse_navigation": False,
    })
elif html_theme == "sphinx_book_theme":
    copyright = copyright.split(",", 1)[0]
    html_theme_options.update({
        "home_page_in_toc": True,
        "show_navbar_depth": 2,
    })

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "sphinx.ext.autosectionlabel",
    "autodocsumm",
    "myst_parser",
]

autodoc_default_options = {
    "member-order": "bysource",
    "show-inheritance": True,
}

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
}
