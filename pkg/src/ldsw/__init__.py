"""Limits and decision procedures for weighted linear dynamical systems."""
__version__ = "0.1.0"
