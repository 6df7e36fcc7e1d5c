"""Finite-kernel quotients of semidirect products, with checkable certificates."""

__version__ = "0.1.0"
