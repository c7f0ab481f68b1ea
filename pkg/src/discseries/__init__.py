"""Symbolic classification of discrete series of p-adic classical groups."""

from .core import (
    EpsilonChar,
    GroupType,
    HalfInt,
    JordanBlock,
    Kind,
    Level,
    Parameter,
    QuadChar,
    ScuspSymbol,
    SdType,
)
from .errors import DiscSeriesError, NotAdmissible, ValidationError

__version__ = "0.1.0"

__all__ = [
    "DiscSeriesError",
    "EpsilonChar",
    "GroupType",
    "HalfInt",
    "JordanBlock",
    "Kind",
    "Level",
    "NotAdmissible",
    "Parameter",
    "QuadChar",
    "ScuspSymbol",
    "SdType",
    "ValidationError",
]
