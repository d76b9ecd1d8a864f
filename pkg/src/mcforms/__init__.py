"""Exact symbolic computation of flat connection forms on configuration spaces of a curve."""

__version__ = "0.1.0"
