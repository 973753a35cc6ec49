"""Maximally linkless graphs: construction, certificate checking and minor search."""

__version__ = "0.1.0"
