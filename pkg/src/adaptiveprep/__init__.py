"""Adaptive quantum circuits for GHZ and W state preparation."""

__version__ = "0.1.0"
