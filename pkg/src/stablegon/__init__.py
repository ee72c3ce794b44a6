"""Certified stable polygons for Dynkin quivers."""
__version__ = "0.1.0"
