"""Exact computation with families of sets under r-wise k-intersection constraints."""
__version__ = "0.1.0"
