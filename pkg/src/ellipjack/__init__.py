"""Jack polynomials and their elliptic deformations from explicit series."""

__version__ = "0.1.0"
