"""Exact computation of asymptotic height pairings for unipotent local systems."""

__version__ = "0.1.0"
