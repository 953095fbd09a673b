"""Numerical laboratory for multilinear fractional integrals, their commutators
with Lipschitz symbols, weighted Lipschitz seminorms and two-weight classes."""

__version__ = "0.1.0"
