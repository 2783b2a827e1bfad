"""Exact computations with representations of shifted Yangians."""

__version__ = "0.3.0"
