"""Finite Morita contexts: exact computations over finite rings and modules."""
__version__ = "0.1.0"
