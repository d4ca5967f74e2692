"""Rendering of allosym run artifacts into publication-style figures.

This package reads the simulator's documented file formats (log.csv,
meta.json, snap_*.json) and never imports the simulator itself, so any
tool that writes the same schemas can use it.
"""

from .render import FigureSpec, KINDS, render

__all__ = ["FigureSpec", "KINDS", "render"]
