"""Exact computations of tropical Jacobians, Abel–Jacobi images and Ceresa classes."""

__version__ = "0.1.0"
