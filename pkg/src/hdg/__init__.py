"""Exact solver and strategy laboratory for the domination game on hypergraphs."""

__version__ = "0.1.0"
