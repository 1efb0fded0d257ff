# Configuration file for the Sphinx documentation builder.
#
# For the full list of options see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

# -- Project information -----------------------------------------------------

project = "HillGap"
copyright = "2026, the HillGap developers"
author = "the HillGap developers"

# The full version, including alpha/beta/rc tags
release = "0.1.0"
version = release


# -- General configuration ---------------------------------------------------

extensions = ["sphinx.ext.autodoc", "sphinx.ext.todo", "sphinx.ext.mathjax", "sphinx_rtd_theme"]

templates_path = ["_templates"]

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]


# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme"

html_theme_options = {
		"collapse_navigation": False,
	}

html_static_path = ["_static"]

# ~~~~~~~~~~~~~~~ sphinx.ext.todo CONFIG ~~~~~~~~~~~~~~~
todo_include_todos = True

# ~~~~~~~~~~~~~~~ AUTODOC CONFIG ~~~~~~~~~~~~~~~

autodoc_typehints = "description"
autodoc_inherit_docstrings = True
autodoc_class_signature = "separated"
autodoc_typehints_description_target = "documented"
autodoc_type_aliases = {
	"ArrayLike": "ArrayLike",
	"NDArray": "NDArray",
	"Coefficient": "Coefficient",
	"ConfigSchema": "ConfigSchema",
	}

autodoc_default_options = {
    "member-order": "bysource",
}
