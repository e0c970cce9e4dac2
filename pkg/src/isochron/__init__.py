"""Necessary and sufficient isochronicity checks for Lienard-type planar polynomial systems."""

__version__ = "0.1.0"
