"""Symbolic computation for self-similar groups acting on rooted trees,
their finitely presented covers, and convergence in the space of marked
groups."""

__version__ = "0.1.0"
