"""
Exact rational tables of the R_m^± polynomials.

R_0^± = 1 and
R_{m+1}^±(T) = ±T/(2(m+1)) Σ_{l=0}^{m} (−1)^l (2l)!/(2^{2l}(l!)²) R_{m−l}^±(T).

They satisfy d^m/dα^m exp(±√α T) at α = 1 equal to m! e^{±T} R_m^±(T), which
gives closed forms for the u and v coefficients.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Tuple

from photocount.exceptions import ContractViolationError

logger = logging.getLogger(__name__)

Poly = Tuple[Fraction, ...]


def _central_weight(l: int) -> Fraction:
    # (2l)! / (2^{2l} (l!)^2)
    return Fraction(comb(2 * l, l), 4 ** l)


def poly_eval(coeffs: Poly, x: Fraction) -> Fraction:
    """Exact Horner evaluation in the monomial basis."""
    result = Fraction(0)
    for c in reversed(coeffs):
        result = result * x + c
    return result


@dataclass(frozen=True)
class RPolyTable:
    """Rows m = 0..max_m of R_m^+ and R_m^- in the monomial basis."""

    max_m: int
    plus_coeffs: Tuple[Poly, ...]
    minus_coeffs: Tuple[Poly, ...]

    def row(self, m: int, sign: int) -> Poly:
        if not 0 <= m <= self.max_m:
            raise ContractViolationError(
                "RPolyTable", f"row {m} outside table of order {self.max_m}",
                {"max_m": self.max_m, "m": m},
            )
        return self.plus_coeffs[m] if sign > 0 else self.minus_coeffs[m]

    def evaluate(self, m: int, sign: int, x: Fraction) -> Fraction:
        return poly_eval(self.row(m, sign), x)

    def degree(self, m: int, sign: int) -> int:
        coeffs = self.row(m, sign)
        for k in range(len(coeffs) - 1, -1, -1):
            if coeffs[k] != 0:
                return k
        return -1


def _next_row(rows: list[Poly], m: int, sign: int) -> Poly:
    # accumulate Σ_l (−1)^l c_l R_{m−l} as a polynomial, then multiply by ±T/(2(m+1))
    acc = [Fraction(0)] * (m + 1)
    for l in range(m + 1):
        weight = _central_weight(l) * (-1) ** l
        for k, c in enumerate(rows[m - l]):
            acc[k] += weight * c
    factor = Fraction(sign, 2 * (m + 1))
    return (Fraction(0),) + tuple(factor * c for c in acc)


def _build_rows(max_m: int, sign: int) -> Tuple[Poly, ...]:
    rows: list[Poly] = [(Fraction(1),)]
    for m in range(max_m):
        rows.append(_next_row(rows, m, sign))
    return tuple(rows)


@lru_cache(maxsize=8)
def build_r_polys(max_m: int) -> RPolyTable:
    """Build the R-polynomial table up to degree max_m (cached, read-only)."""
    if max_m < 0:
        raise ContractViolationError("build_r_polys", f"max_m must be non-negative, got {max_m}")
    table = RPolyTable(max_m=max_m, plus_coeffs=_build_rows(max_m, +1), minus_coeffs=_build_rows(max_m, -1))
    logger.debug("Built R-polynomial table up to m=%d", max_m)
    return table
