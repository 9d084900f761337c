"""
Truncated power-series coefficient sequences and their convolution algebra.
"""

from .algebra import (
    CoeffSeq,
    align,
    convolve,
    evaluate,
    geometric_resolvent,
    inverse,
    power,
    power_components,
)

__all__ = [
    "CoeffSeq",
    "align",
    "convolve",
    "evaluate",
    "geometric_resolvent",
    "inverse",
    "power",
    "power_components",
]
