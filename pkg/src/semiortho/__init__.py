"""Exact arithmetic for non-symmetric unimodular bilinear forms."""

__version__ = "0.1.0"
