"""
Moments of the absorbed energy J.

The Laplace transform Q(lambda) = E[exp(−lambda J)] expands as Σ x_n z^n with
z = theta·lambda and X = (E + W)^{-1}, so that

    M_n = E[J^n] = (−1)^n n! theta^n x_n.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from photocount.exceptions import ContractViolationError, NumericalDegradationError
from photocount.moments.coefficients import AuxCoeffs, w_coeffs
from photocount.moments.params import EvalPoint, ModelParams
from photocount.moments.rpoly import RPolyTable
from photocount.series import CoeffSeq, inverse
from photocount.types import Backend, Route, Scalar, mp_context, mpf_from_fraction

logger = logging.getLogger(__name__)


def x_coeffs(max_n: int, aux: AuxCoeffs) -> CoeffSeq:
    """X = (E + W)^{-1} truncated at max_n."""
    if max_n < 0:
        raise ContractViolationError("x_coeffs", f"max_n must be non-negative, got {max_n}")
    if aux.max_m < max_n:
        raise ContractViolationError(
            "x_coeffs", f"need w_0..w_{max_n}, have {aux.max_m + 1} components",
            {"max_n": max_n, "available": aux.max_m + 1},
        )
    w = CoeffSeq.of(aux.w[: max_n + 1], aux.backend, aux.dps)
    return inverse(CoeffSeq.unit(max_n, aux.backend, aux.dps) + w)


def _compositions(total: int) -> List[Tuple[int, ...]]:
    # ordered splittings of total into positive parts
    out = []
    for k in range(1, total + 1):
        for cuts in combinations(range(1, total), k - 1):
            edges = (0,) + cuts + (total,)
            out.append(tuple(b - a for a, b in zip(edges, edges[1:])))
    return out


def x_by_compositions(w: Union[CoeffSeq, Sequence[Scalar]], max_n: int) -> Tuple[Scalar, ...]:
    """x_m = Σ_k (−1)^k Σ_{m_1+...+m_k = m, m_i ≥ 1} w_{m_1}···w_{m_k}.

    Enumerates 2^{m−1} compositions per order; for cross-checks on small orders.
    """
    coeffs = tuple(w)
    if len(coeffs) <= max_n:
        raise ContractViolationError("x_by_compositions", f"need {max_n + 1} components of w, got {len(coeffs)}")
    one = coeffs[0] * 0 + 1
    out: List[Scalar] = [one]
    for m in range(1, max_n + 1):
        acc = one * 0
        for parts in _compositions(m):
            prod = one
            for p in parts:
                prod = prod * coeffs[p]
            acc = acc + (prod if len(parts) % 2 == 0 else -prod)
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class MomentTable:
    """x_0..x_N and M_0..M_N at one parameter point."""

    params: ModelParams
    x: Tuple[Scalar, ...]
    moments: Tuple[Scalar, ...]
    route: Route
    backend: Backend = Backend.FLOAT

    @property
    def order(self) -> int:
        return len(self.moments) - 1

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {"n": n, "x": float(x), "moment": float(m)}
            for n, (x, m) in enumerate(zip(self.x, self.moments))
        ]


def moments(
    max_n: int,
    params: ModelParams,
    *,
    backend: Backend = Backend.FLOAT,
    dps: Optional[int] = None,
    route: Optional[Route] = None,
) -> MomentTable:
    """M_n = (−1)^n n! theta^n x_n for n = 0..max_n."""
    if max_n < 0:
        raise ContractViolationError("moments", f"max_n must be non-negative, got {max_n}")
    aux = w_coeffs(max_n, params.tau, route=route, backend=backend, dps=dps)
    x = x_coeffs(max_n, aux)
    theta = mp_context(aux.dps).mpf(params.theta) if aux.backend is Backend.MULTIPRECISION else params.theta

    values = []
    scale = x[0] * 0 + 1
    for n, x_n in enumerate(x):
        values.append(scale * x_n)
        scale = -scale * (n + 1) * theta

    # at tau == 0, J == 0 and every higher moment vanishes exactly
    if params.tau > 0:
        for n in range(1, max_n + 1):
            if not values[n] > 0:
                raise NumericalDegradationError(
                    f"moment M_{n} lost its sign ({float(values[n])!r})",
                    "use the multiprecision backend or a smaller tau",
                    {"n": n, "tau": params.tau, "theta": params.theta, "backend": aux.backend.value},
                )
    logger.debug("moments up to n=%d at tau=%r via %s", max_n, params.tau, aux.route.value)
    return MomentTable(params=params, x=tuple(x), moments=tuple(values), route=aux.route, backend=aux.backend)


def gen_func(point: Union[EvalPoint, float], params: ModelParams) -> float:
    """Q(lambda) = 4q e^{tau(1−q)} / ((1+q)^2 − (q−1)^2 e^{−2q tau})."""
    if not isinstance(point, EvalPoint):
        point = EvalPoint.at(float(point), params)
    q = point.q
    tau = params.tau
    denominator = (1.0 + q) ** 2 - (q - 1.0) ** 2 * math.exp(-2.0 * q * tau)
    return 4.0 * q * math.exp(tau * (1.0 - q)) / denominator


def moment_bound(n: int, params: ModelParams) -> float:
    """A-priori estimate M_n < C n! zeta^n."""
    from photocount.distribution.special import BesselPack

    if n < 0:
        raise ContractViolationError("moment_bound", f"n must be non-negative, got {n}")
    pack = BesselPack.at(params.tau)
    zeta = pack.growth * params.theta * params.tau / 4.0
    return pack.prefactor * math.factorial(n) * zeta ** n


class IdentityCheck(NamedTuple):
    numeric: float
    closed: float

    @property
    def rel_error(self) -> float:
        if self.closed == 0:
            return abs(self.numeric)
        return abs(self.numeric - self.closed) / abs(self.closed)


def derivative_identity(m: int, sign: int, tau: float, table: RPolyTable, dps: int = 40) -> IdentityCheck:
    """Compare d^m/dα^m exp(±√α tau) at α = 1 with m! e^{±tau} R_m^±(tau)."""
    ctx = mp_context(dps)
    t = ctx.mpf(tau)
    s = 1 if sign > 0 else -1
    numeric = ctx.diff(lambda alpha: ctx.exp(s * ctx.sqrt(alpha) * t), 1, m)
    r_value = mpf_from_fraction(ctx, table.evaluate(m, s, Fraction(tau)))
    closed = math.factorial(m) * ctx.exp(s * t) * r_value
    return IdentityCheck(numeric=float(numeric), closed=float(closed))