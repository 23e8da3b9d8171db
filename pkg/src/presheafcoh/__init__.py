"""Cohomology of diagrams of algebras over small categories."""

__version__ = "0.1.0"
