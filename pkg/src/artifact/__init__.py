"""Exact braid computations through integer lamination coordinates."""

from .braid_core import BraidLetter, BraidWord, parse_word, format_word
from .lamination_coords import CoordVector, apply_word, norm, standard_diagram, KERNEL

__version__ = "0.1.0"

__all__ = [
    "BraidLetter",
    "BraidWord",
    "CoordVector",
    "KERNEL",
    "apply_word",
    "format_word",
    "norm",
    "parse_word",
    "standard_diagram",
    "__version__",
]
