"""Determinants of birational maps of Severi-Brauer surfaces, computed exactly."""

__version__ = "0.1.0"
