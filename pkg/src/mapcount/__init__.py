"""Exact enumeration of Ising-weighted planar maps and their connectivity classes."""

__version__ = "0.1.0"
