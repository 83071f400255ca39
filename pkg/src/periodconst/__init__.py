"""Exact period constants and weak-center analysis for planar polynomial systems."""

__version__ = "0.1.0"
