"""Numerical verification engine for four-dimensional almost Kahler geometry."""

__version__ = "0.1.0"
