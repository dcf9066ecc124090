"""Skysplit: coverage and volume spectral efficiency of plane-split UAV networks."""

__version__ = "0.3.0"
