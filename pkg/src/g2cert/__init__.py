"""Verification engine for ERP G2-structures on 7-dimensional solvable Lie algebras."""

__version__ = "0.1.0"
