"""Compiler from MDL sources to nonlinear mass-spring networks."""

__version__ = "0.1.0"
