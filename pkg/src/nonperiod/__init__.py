"""Exact elementary reals, a diagonal non-period, and certified period volumes."""

__version__ = "0.1.0"
