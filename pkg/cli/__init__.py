"""Command-line interface and SVG plotting."""

from .main import build_parser, main
from .plot import plot, render_svg

__all__ = ["build_parser", "main", "plot", "render_svg"]
