"""Quaternionic hyperbolic space, polar reductions, and minimal hypersurfaces."""

__version__ = "0.1.0"
