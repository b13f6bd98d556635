"""Exact verification toolkit for the Wiman-Edge monodromy group."""

__version__ = "0.1.0"
