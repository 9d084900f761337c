"""
Shared enums and numeric helpers for the photocount package.
"""
from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Any, Union

import mpmath

# multiprecision values belong to per-precision contexts whose mpf classes mirror mpmath.mpf
Scalar = Union[float, Fraction, mpmath.mpf]


class Backend(str, Enum):
    """Coefficient arithmetic used by a computation."""

    FLOAT = "float"
    EXACT = "exact"
    MULTIPRECISION = "mp"


class Route(str, Enum):
    """How the auxiliary u/v/w coefficients were evaluated."""

    DIRECT_SERIES = "direct-series"
    CLOSED_FORM = "closed-form"


@lru_cache(maxsize=32)
def mp_context(dps: int) -> mpmath.MPContext:
    """An isolated mpmath context; never mutate the returned object."""
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


def to_fraction(value: Any) -> Fraction:
    """Exact rational image of ints, rationals, decimal strings and binary floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r} has no rational image")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def mpf_from_fraction(ctx: mpmath.MPContext, value: Fraction):
    return ctx.mpf(value.numerator) / value.denominator
