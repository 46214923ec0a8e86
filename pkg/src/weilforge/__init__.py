"""Certified Weil polynomials over F_2 of prescribed order."""

from .exactpoly import IntPoly, Rat

__version__ = '0.1.0'

__all__ = ['IntPoly', 'Rat', '__version__']
