"""Spherical functions for untwisted simply-laced affine Kac-Moody groups.

Exact truncated arithmetic in the completed coweight group algebra, the
affine Weyl group and its Hecke algebra, and two independent computations
of the Satake image of a double-coset indicator.
"""
from .cartan import Coweight, RootAff, cartan_type
from .weyl import ExtendedElement, WeylElement, fromWord, simpleReflection
from .series import Series, TruncationContext
from .spherical import SatakeResult, satake, satakeByDisassembly, satakeByMacdonald

__all__ = [
    "Coweight", "RootAff", "cartan_type",
    "ExtendedElement", "WeylElement", "fromWord", "simpleReflection",
    "Series", "TruncationContext",
    "SatakeResult", "satake", "satakeByDisassembly", "satakeByMacdonald",
]

__version__ = "0.1.0"
