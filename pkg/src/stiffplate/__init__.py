"""Limit models of an elastic stiffened plate, with a 3D reference solver."""

__version__ = "0.1.0"
