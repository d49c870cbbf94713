"""Bandwidth-optimal protection planning for storage networks without newcomers."""

__version__ = "0.1.0"
