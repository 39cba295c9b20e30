"""Construction and verification toolkit for neutral (2,2) four-dimensional geometry."""

__version__ = "0.1.0"
