"""Reversible hinged dissections from pairs of non-crossing cut trees on a polyhedron."""

__version__ = "0.1.0"
