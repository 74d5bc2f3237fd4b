"""Kernel and batch checker for a dependent type theory with a directed
interval: constraint (tope) logic over the interval, extension types with
judgmental boundaries, identity types with their eliminator, and two
universe levels, together with a machine-checked corpus built on them."""

__version__ = "0.1.0"
