"""Reflected Brownian motions and the finite-step / stationary Airy laws."""

__version__ = "1.0.0"
