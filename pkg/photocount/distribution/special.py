"""Modified Bessel functions I0, I1 by their power series, and psi(tau)."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

from photocount.exceptions import DomainError

logger = logging.getLogger(__name__)

_TAIL_TOL = 1e-16
_MAX_TERMS = 500


def _check_argument(name: str, x: float) -> None:
    if not (math.isfinite(x) and x >= 0):
        raise DomainError(name, f"argument must be finite and non-negative, got {x!r}", {"x": x})


def _series(first: float, ratio) -> float:
    total = term = first
    for k in range(_MAX_TERMS):
        if term == 0:
            break
        term *= ratio(k)
        total += term
        if term < _TAIL_TOL * total:
            break
    return total


def bessel_i0(x: float) -> float:
    """I0(x) = Σ (x/2)^{2n} / (n!)^2."""
    _check_argument("bessel_i0", x)
    h2 = (x / 2.0) ** 2
    return _series(1.0, lambda n: h2 / ((n + 1) * (n + 1)))


def bessel_i1(x: float) -> float:
    """I1(x) = Σ_{m≥1} (x/2)^{2m−1} / (m!(m−1)!)."""
    _check_argument("bessel_i1", x)
    h2 = (x / 2.0) ** 2
    # term m -> m+1 multiplies by h2 / ((m+1) m), starting at m = 1
    return _series(x / 2.0, lambda k: h2 / ((k + 2) * (k + 1)))


@lru_cache(maxsize=1)
def _bessel_at_two() -> tuple[float, float]:
    return bessel_i0(2.0), bessel_i1(2.0)


def psi(tau: float) -> float:
    """psi(tau) = tau I1(2) + (tau^2/2)(I0(2) − 1) + I0(2)."""
    _check_argument("psi", tau)
    i0_2, i1_2 = _bessel_at_two()
    return tau * i1_2 + (tau * tau / 2.0) * (i0_2 - 1.0) + i0_2


@dataclass(frozen=True)
class BesselPack:
    tau: float
    i0_tau: float
    i1_tau: float
    i0_2: float
    i1_2: float
    psi: float

    @classmethod
    def at(cls, tau: float) -> "BesselPack":
        i0_2, i1_2 = _bessel_at_two()
        return cls(
            tau=tau,
            i0_tau=bessel_i0(tau),
            i1_tau=bessel_i1(tau),
            i0_2=i0_2,
            i1_2=i1_2,
            psi=psi(tau),
        )

    @property
    def growth(self) -> float:
        """e·psi·I0(tau), the base of the geometric coefficient estimates."""
        return math.e * self.psi * self.i0_tau

    @property
    def prefactor(self) -> float:
        """C = e psi I0 / (e psi I0 − tau); greater than one for tau > 0."""
        return self.growth / (self.growth - self.tau)
