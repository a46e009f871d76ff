"""Numerical kernels of the radially deformed Fourier transform."""
__version__ = "0.1.0"
