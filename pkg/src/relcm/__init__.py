"""Relative Cohen-Macaulay and Buchsbaum computations over graded polynomial rings."""
__version__ = "0.1.0"
