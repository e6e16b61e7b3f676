"""Exact computations with finite-dimensional polyhedral normed spaces."""

__version__ = "0.1.0"
