"""Numerical laboratory for real operator monotone free functions."""

from ._backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
