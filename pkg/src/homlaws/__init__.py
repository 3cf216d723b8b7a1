"""Homomorphism classes of digraphs: duals, densities, coloured counts and 0-1 laws."""

__version__ = "0.1.0"
