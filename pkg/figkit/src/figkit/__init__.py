"""Render publication-style figures from ratchetsim CSV bundles."""

from .bundle import BundleError, FigureBundle, Table, load_bundle, read_table
from .render import render

__version__ = "0.1.0"

__all__ = ["BundleError", "FigureBundle", "Table", "load_bundle",
           "read_table", "render", "__version__"]
