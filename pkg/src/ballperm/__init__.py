"""Exact simulation and verification tools for ball-permuting circuits."""

__version__ = "0.1.0"
