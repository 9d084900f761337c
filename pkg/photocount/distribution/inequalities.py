"""
Runnable checks of the a-priori estimates behind the accuracy bound.

Each check evaluates both sides of one inequality and records the margin
(rhs − lhs) / |rhs|; a report collects them and can raise on the first
violation.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from photocount.distribution.approx import tail_series_bound
from photocount.distribution.special import BesselPack
from photocount.exceptions import ContractViolationError, InequalityViolationError
from photocount.moments import w_coeffs, x_coeffs

logger = logging.getLogger(__name__)

LOG_BOUND = "log-linear"
FACTORIAL = "central-factorial"
U_BOUND = "u-coefficient"
V_BOUND = "v-over-u"
W_BOUND = "w-coefficient"
X_BOUND = "x-coefficient"
PREFACTOR = "prefactor-positive"
TAIL_BOUND = "tail-series"

_ALPHA_POINTS = 51
_TAIL_ZETAS = (0.1, 0.25, 0.4)


@dataclass(frozen=True)
class InequalityCheck:
    lemma: str
    m: Optional[int]
    tau: float
    lhs: float
    rhs: float
    strict: bool = False

    @property
    def passed(self) -> bool:
        return self.lhs < self.rhs if self.strict else self.lhs <= self.rhs

    @property
    def margin(self) -> float:
        scale = abs(self.rhs) or 1.0
        return (self.rhs - self.lhs) / scale

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lemma": self.lemma,
            "m": self.m,
            "tau": self.tau,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "passed": self.passed,
        }


@dataclass
class InequalityReport:
    max_m: int
    tau: float
    checks: List[InequalityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[InequalityCheck]:
        return [c for c in self.checks if not c.passed]

    def by_lemma(self, lemma: str) -> List[InequalityCheck]:
        return [c for c in self.checks if c.lemma == lemma]

    def raise_for_failure(self) -> None:
        for check in self.failures:
            raise InequalityViolationError(check.lemma, check.m, check.tau, check.to_dict())


def _log_bound_checks(tau: float) -> List[InequalityCheck]:
    # ln(1 − alpha) >= −2 alpha on [0, 1/2], written as lhs <= rhs
    out = []
    for i in range(_ALPHA_POINTS):
        alpha = 0.5 * i / (_ALPHA_POINTS - 1)
        out.append(InequalityCheck(LOG_BOUND, None, tau, lhs=-2.0 * alpha, rhs=math.log1p(-alpha)))
    return out


def _tail_checks(max_m: int, tau: float) -> List[InequalityCheck]:
    # Σ_{l>=N} l!/(l−n)! zeta^l <= n!(2 zeta)^N / (1 − 2 zeta) for n <= N; independent of tau
    out = []
    for zeta_value in _TAIL_ZETAS:
        for N in range(1, max_m + 1):
            for n in range(N + 1):
                tail = tail_series_bound(N, zeta_value, n)
                out.append(InequalityCheck(TAIL_BOUND, N, tau, lhs=tail.exact, rhs=tail.estimate))
    return out


def inequality_suite(max_m: int, tau: float) -> InequalityReport:
    """Evaluate every coefficient estimate for m up to max_m at one tau."""
    if max_m < 2:
        raise ContractViolationError("inequality_suite", f"max_m must be at least 2, got {max_m}")
    if not (math.isfinite(tau) and tau > 0):
        raise ContractViolationError("inequality_suite", f"tau must be positive (phi(m) divides by tau), got {tau!r}")

    pack = BesselPack.at(tau)
    aux = w_coeffs(max_m, tau)
    x = x_coeffs(max_m, aux)
    report = InequalityReport(max_m=max_m, tau=tau)
    checks = report.checks

    checks.extend(_log_bound_checks(tau))
    checks.append(InequalityCheck(PREFACTOR, None, tau, lhs=tau, rhs=pack.growth, strict=True))
    checks.extend(_tail_checks(max_m, tau))

    half2 = (tau / 2.0) ** 2
    x_base = pack.growth * tau / 4.0
    for m in range(1, max_m + 1):
        fact_m = math.factorial(m)
        fact_m1 = math.factorial(m - 1)
        checks.append(InequalityCheck(
            FACTORIAL, m, tau,
            lhs=1.0 / math.factorial(2 * m),
            rhs=math.e * m / (4 ** m * fact_m * fact_m),
        ))
        u_rhs = math.e * half2 ** m * pack.i0_tau / fact_m1
        checks.append(InequalityCheck(U_BOUND, m, tau, lhs=float(aux.u[m]), rhs=u_rhs))
        checks.append(InequalityCheck(V_BOUND, m, tau, lhs=float(aux.v[m]), rhs=tau / (2 * m + 1) * float(aux.u[m])))
        phi = 1.0 + tau / (2 * m) + m / tau
        w_rhs = math.e / (fact_m * fact_m1) * half2 ** m * pack.i0_tau * phi
        checks.append(InequalityCheck(W_BOUND, m, tau, lhs=float(aux.w[m]), rhs=w_rhs, strict=True))
        if m > 1:
            checks.append(InequalityCheck(
                X_BOUND, m, tau, lhs=abs(float(x[m])), rhs=pack.prefactor * x_base ** m, strict=True,
            ))

    if report.passed:
        logger.info("inequality suite passed: %d checks at tau=%r", len(checks), tau)
    else:
        for check in report.failures:
            logger.warning("inequality %s failed at m=%s tau=%r (margin %.3g)", check.lemma, check.m, tau, check.margin)
    return report


def x_bound_ratio(m: int, tau: float) -> float:
    """Bound-to-value ratio C (e tau psi I0 / 4)^m / |x_m|.

    Tends to (e I0(2) / 2)^m as tau -> 0.
    """
    if m < 2:
        raise ContractViolationError("x_bound_ratio", f"estimate holds for m > 1, got {m}")
    pack = BesselPack.at(tau)
    x = x_coeffs(m, w_coeffs(m, tau))
    return pack.prefactor * (pack.growth * tau / 4.0) ** m / abs(float(x[m]))


def x_bound_ratio_limit(m: int) -> float:
    pack = BesselPack.at(0.0)
    return (math.e * pack.i0_2 / 2.0) ** m
