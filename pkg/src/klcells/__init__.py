"""Kazhdan-Lusztig cells of rank 2 Coxeter groups with unequal parameters."""

from .coxeter import CoxeterGroup, GroupElement, get_group, preset
from .kernel import BACKEND
from .laurent import LaurentPoly
from .weights import WeightFunction

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CoxeterGroup",
    "GroupElement",
    "LaurentPoly",
    "WeightFunction",
    "get_group",
    "preset",
]
