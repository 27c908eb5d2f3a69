"""Exact derivation and verification of explicit Runge-Kutta methods."""

__version__ = "0.1.0"
