"""
Auxiliary coefficients u_m, v_m, w_m of the expansion of G = e^tau / Q.

Two evaluation routes:

* direct series: positive-term sums
  u_m = Σ_{n≥m} tau^{2n}/(2n)! · n!/(n−m)!,  v_m = Σ_{n≥m} tau^{2n+1}/(2n+1)! · n!/(n−m)!
* closed form: u_m, v_m through the R_m^± polynomials and e^{±tau}.

The closed form cancels catastrophically at small tau (the two exponential
terms are O(1) while their sum is O(tau^{2m})), so it is evaluated with the
R-polynomials taken exactly at the binary value of tau and the exponentials
in multiprecision, with digits raised until the cancellation is paid for.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Tuple

from photocount.config import get_settings
from photocount.exceptions import ContractViolationError, NumericalDegradationError
from photocount.moments.rpoly import RPolyTable, build_r_polys
from photocount.types import Backend, Route, Scalar, mp_context, mpf_from_fraction

logger = logging.getLogger(__name__)

# correct digits demanded from the closed-form route beyond what the caller keeps
_GUARD_DIGITS = 20
_MAX_DPS = 5000


@dataclass(frozen=True)
class AuxCoeffs:
    """u, v, w sequences at one value of tau."""

    tau: float
    u: Tuple[Scalar, ...]
    v: Tuple[Scalar, ...]
    w: Tuple[Scalar, ...]
    route: Route
    backend: Backend = Backend.FLOAT
    dps: Optional[int] = None

    @property
    def max_m(self) -> int:
        return len(self.w) - 1

    @property
    def normalization(self) -> Scalar:
        """e^{−tau}(u_0 + v_0), identically 1."""
        exp = mp_context(self.dps).exp if self.backend is Backend.MULTIPRECISION else math.exp
        return exp(-self._tau_value()) * (self.u[0] + self.v[0])

    def _tau_value(self) -> Any:
        if self.backend is Backend.MULTIPRECISION:
            return mp_context(self.dps).mpf(self.tau)
        return self.tau


def _check_tau(operation: str, tau: float, strict: bool = False) -> None:
    if not math.isfinite(tau) or tau < 0 or (strict and tau == 0):
        bound = "positive" if strict else "non-negative"
        raise ContractViolationError(operation, f"tau must be finite and {bound}, got {tau!r}", {"tau": tau})


def _number_system(backend: Backend, dps: Optional[int]):
    """(coerce, exp, one) for the float or multiprecision route."""
    if backend is Backend.MULTIPRECISION:
        ctx = mp_context(dps or get_settings().series.mp_dps)
        return ctx.mpf, ctx.exp, ctx.mpf(1)
    if backend is Backend.FLOAT:
        return float, math.exp, 1.0
    raise ContractViolationError(
        "moments", "transcendental coefficients need the float or multiprecision backend",
        {"backend": backend.value},
    )


def _positive_series(first: Any, ratio, tol: Any, max_terms: int, label: str) -> Any:
    """Sum first + ... with term_{j+1} = term_j * ratio(j); all terms positive."""
    total = first
    term = first
    for j in range(max_terms - 1):
        if term == 0:
            return total
        term = term * ratio(j)
        total = total + term
        if term < tol * total:
            logger.debug("%s converged after %d terms", label, j + 2)
            return total
    logger.warning("%s hit the %d-term cap before reaching the tolerance", label, max_terms)
    return total


def uv_direct(
    m: int,
    tau: float,
    tol: Optional[float] = None,
    *,
    backend: Backend = Backend.FLOAT,
    dps: Optional[int] = None,
    max_terms: Optional[int] = None,
) -> Tuple[Scalar, Scalar]:
    """(u_m, v_m) by summing the defining positive series."""
    _check_tau("uv_direct", tau)
    if m < 0:
        raise ContractViolationError("uv_direct", f"m must be non-negative, got {m}")
    settings = get_settings().series
    coerce, _, one = _number_system(backend, dps)
    if tol is None:
        tol = settings.rel_tol if backend is Backend.FLOAT else 10.0 ** -(dps or settings.mp_dps)
    if not tol > 0:
        raise ContractViolationError("uv_direct", f"tol must be positive, got {tol!r}")
    tol = coerce(tol)
    cap = max_terms or settings.max_terms

    t = coerce(tau)
    t2 = t * t
    # leading terms n = m:  m!/(2m)! = Π 1/(2(2k−1)),  m!/(2m+1)! = Π 1/(2(2k+1))
    u_first = one
    v_first = t
    for k in range(1, m + 1):
        u_first = u_first * t2 / (2 * (2 * k - 1))
        v_first = v_first * t2 / (2 * (2 * k + 1))

    # term ratios n -> n+1 with n = m + j
    u = _positive_series(u_first, lambda j: t2 / (2 * (2 * (m + j) + 1) * (j + 1)), tol, cap, f"u_{m}")
    v = _positive_series(v_first, lambda j: t2 / (2 * (2 * (m + j) + 3) * (j + 1)), tol, cap, f"v_{m}")
    return u, v


def _exp_combination(a_plus: Fraction, a_minus: Fraction, x: Fraction, keep_digits: int):
    """a_plus·e^{x} + a_minus·e^{−x} with at least keep_digits correct digits.

    Returns an mpf of a context with enough working precision.
    """
    dps = keep_digits + _GUARD_DIGITS
    while True:
        ctx = mp_context(dps)
        ex = ctx.exp(mpf_from_fraction(ctx, x))
        left = ex * mpf_from_fraction(ctx, a_plus)
        right = mpf_from_fraction(ctx, a_minus) / ex
        value = left + right
        scale = abs(left) + abs(right)
        if scale == 0:
            return value
        lost = dps if value == 0 else max(0.0, float(ctx.log10(scale / abs(value))))
        if dps - lost >= keep_digits + _GUARD_DIGITS // 2:
            logger.debug("closed form: %d digits, %.1f lost to cancellation", dps, lost)
            return value
        dps = int(math.ceil(lost)) + keep_digits + _GUARD_DIGITS
        if dps > _MAX_DPS:
            raise NumericalDegradationError(
                "closed-form cancellation exceeds the multiprecision budget",
                "use the direct-series route for this tau",
                {"x": float(x), "dps": dps},
            )


def _check_table(operation: str, table: RPolyTable, needed: int) -> None:
    if table.max_m < needed:
        raise ContractViolationError(
            operation, f"R-polynomial table of order {table.max_m} needs order {needed}",
            {"max_m": table.max_m, "needed": needed},
        )


def _keep_digits(backend: Backend, dps: Optional[int]) -> int:
    if backend is Backend.MULTIPRECISION:
        return dps or get_settings().series.mp_dps
    return 17


def _export(value, backend: Backend, dps: Optional[int]) -> Scalar:
    if backend is Backend.MULTIPRECISION:
        return mp_context(dps or get_settings().series.mp_dps).mpf(value)
    return float(value)


def uv_closed(
    m: int,
    tau: float,
    table: RPolyTable,
    *,
    backend: Backend = Backend.FLOAT,
    dps: Optional[int] = None,
) -> Tuple[Scalar, Scalar]:
    """(u_m, v_m) from the R-polynomial closed forms.

    u_m = (m!/2)(e^tau R_m^+ + e^{−tau} R_m^−)
    v_m = ((m+1)!/tau)(e^tau R_{m+1}^+ + e^{−tau} R_{m+1}^−)
    """
    _check_tau("uv_closed", tau, strict=True)
    _check_table("uv_closed", table, m + 1)
    _number_system(backend, dps)
    keep = _keep_digits(backend, dps)
    x = Fraction(tau)

    u_comb = _exp_combination(table.evaluate(m, +1, x), table.evaluate(m, -1, x), x, keep)
    v_comb = _exp_combination(table.evaluate(m + 1, +1, x), table.evaluate(m + 1, -1, x), x, keep)
    u = u_comb * math.factorial(m) / 2
    v = v_comb * math.factorial(m + 1) / mpf_from_fraction(mp_context(max(keep, 17) + _GUARD_DIGITS), x)
    return _export(u, backend, dps), _export(v, backend, dps)


def w_closed(
    m: int,
    tau: float,
    table: RPolyTable,
    *,
    backend: Backend = Backend.FLOAT,
    dps: Optional[int] = None,
) -> Scalar:
    """w_m directly from R_m^±, R_{m+1}^± (m ≥ 1).

    w_m = ½R_m^+(1 + m/tau) + ((m+1)/tau)R_{m+1}^+ + e^{−2tau}[½R_m^−(1 + m/tau) + ((m+1)/tau)R_{m+1}^−]
    """
    if m < 1:
        raise ContractViolationError("w_closed", f"closed form holds for m >= 1, got {m}")
    _check_tau("w_closed", tau, strict=True)
    _check_table("w_closed", table, m + 1)
    _number_system(backend, dps)
    keep = _keep_digits(backend, dps)
    x = Fraction(tau)

    def bracket(sign: int) -> Fraction:
        return (table.evaluate(m, sign, x) * (1 + Fraction(m) / x) / 2
                + table.evaluate(m + 1, sign, x) * (m + 1) / x)

    # P + e^{−2x} Q = e^{−x}(P e^{x} + Q e^{−x})
    comb = _exp_combination(bracket(+1), bracket(-1), x, keep)
    ctx = mp_context(max(keep, 17) + _GUARD_DIGITS)
    value = comb * ctx.exp(-mpf_from_fraction(ctx, x))
    return _export(value, backend, dps)


def select_route(tau: float, switch_tau: Optional[float] = None) -> Route:
    """Direct series for tau ≤ switch (default 1), closed form above."""
    switch = get_settings().series.route_switch_tau if switch_tau is None else switch_tau
    return Route.DIRECT_SERIES if tau <= switch else Route.CLOSED_FORM


def w_coeffs(
    max_m: int,
    tau: float,
    *,
    route: Optional[Route] = None,
    backend: Backend = Backend.FLOAT,
    dps: Optional[int] = None,
) -> AuxCoeffs:
    """u_0..u_M, v_0..v_M and W = ⟨0, w_1, ..., w_M⟩ with
    w_m = (1/m!) e^{−tau}(u_m + m v_{m−1}/2 + v_m)."""
    _check_tau("w_coeffs", tau)
    if max_m < 0:
        raise ContractViolationError("w_coeffs", f"max_m must be non-negative, got {max_m}")
    coerce, exp, _ = _number_system(backend, dps)
    if backend is Backend.MULTIPRECISION:
        dps = dps or get_settings().series.mp_dps
    route = Route(route) if route is not None else select_route(tau)
    if tau == 0 and route is Route.CLOSED_FORM:
        logger.debug("tau == 0 forces the direct-series route")
        route = Route.DIRECT_SERIES

    if route is Route.DIRECT_SERIES:
        pairs = [uv_direct(m, tau, backend=backend, dps=dps) for m in range(max_m + 1)]
    else:
        table = build_r_polys(max_m + 1)
        pairs = [uv_closed(m, tau, table, backend=backend, dps=dps) for m in range(max_m + 1)]
    u = tuple(p[0] for p in pairs)
    v = tuple(p[1] for p in pairs)

    damp = exp(-coerce(tau))
    w = [coerce(0)]
    for m in range(1, max_m + 1):
        w.append(damp * (u[m] + m * v[m - 1] / 2 + v[m]) / math.factorial(m))
    logger.debug("w_coeffs(max_m=%d, tau=%r) via %s", max_m, tau, route.value)
    return AuxCoeffs(tau=tau, u=u, v=v, w=tuple(w), route=route, backend=backend, dps=dps)
