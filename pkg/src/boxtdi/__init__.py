"""Exact tools for box-integrality, box-TDI systems and equimodular matrices."""

__version__ = "0.1.0"
