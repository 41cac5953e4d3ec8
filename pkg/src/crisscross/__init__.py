"""Criss-cross insertion/deletion-correcting codes for binary square arrays."""

from .core import BitArray2D, FieldContext
from .errors import CrissCrossError

__all__ = ["BitArray2D", "FieldContext", "CrissCrossError"]
__version__ = "0.1.0"
