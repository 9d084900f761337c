"""
Truncated Mandel distribution P_n^(N) and its guaranteed accuracy.

With c_k = M_k / k! = (−theta)^k x_k the approximation of order N reads

    P_n^(N) = Σ_{l=0}^{N−n} (−1)^l C(n+l, n) c_{n+l},   n = 0..N,

and P_n^(N) = 0 above N. The partial sums telescope, so Σ_n P_n^(N) == 1.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from photocount.distribution.special import BesselPack
from photocount.exceptions import ContractViolationError
from photocount.moments import ModelParams, moments
from photocount.types import Backend, Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AccuracyBound:
    """Bound on |P_n − P_n^(N)|, uniform in n; ``value`` is None when zeta ≥ 1/2."""

    zeta: float
    value: Optional[float]

    @property
    def available(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class DistApprox:
    params: ModelParams
    order_N: int
    probs: Tuple[Scalar, ...]
    zeta: float
    bound: Optional[float]

    @property
    def accuracy(self) -> AccuracyBound:
        return AccuracyBound(zeta=self.zeta, value=self.bound)

    @property
    def negative_mass(self) -> bool:
        """True when truncation produced a negative probability."""
        return any(p < 0 for p in self.probs)

    @property
    def total(self) -> float:
        return math.fsum(float(p) for p in self.probs)

    def prob(self, n: int) -> Scalar:
        if n < 0:
            raise ContractViolationError("DistApprox.prob", f"n must be non-negative, got {n}")
        return self.probs[n] if n <= self.order_N else 0.0

    def as_rows(self) -> List[Dict[str, Any]]:
        return [{"n": n, "probability": float(p)} for n, p in enumerate(self.probs)]


def zeta(params: ModelParams, pack: Optional[BesselPack] = None) -> float:
    """zeta = e sigma tau psi(tau) I0(tau) / (2 nu^2)."""
    pack = pack or BesselPack.at(params.tau)
    return math.e * params.sigma * params.tau * pack.psi * pack.i0_tau / (2.0 * params.nu * params.nu)


def error_bound(N: int, params: ModelParams) -> AccuracyBound:
    """C (2 zeta)^{N+1} / (1 − 2 zeta) with C = e psi I0 / (e psi I0 − tau)."""
    if N < 0:
        raise ContractViolationError("error_bound", f"N must be non-negative, got {N}")
    pack = BesselPack.at(params.tau)
    z = zeta(params, pack)
    if z >= 0.5:
        logger.warning("error bound unavailable: zeta=%.6g >= 1/2 (shrink t_phys or sigma)", z)
        return AccuracyBound(zeta=z, value=None)
    value = pack.prefactor * (2.0 * z) ** (N + 1) / (1.0 - 2.0 * z)
    return AccuracyBound(zeta=z, value=value)


def approx_dist(
    N: int,
    params: ModelParams,
    *,
    backend: Backend = Backend.FLOAT,
    dps: Optional[int] = None,
) -> DistApprox:
    """P_0^(N)..P_N^(N) with zeta and the accuracy bound attached."""
    if N < 0:
        raise ContractViolationError("approx_dist", f"N must be non-negative, got {N}")
    table = moments(N, params, backend=backend, dps=dps)
    c = [m / math.factorial(k) for k, m in enumerate(table.moments)]

    probs = []
    for n in range(N + 1):
        terms = [(-1) ** l * math.comb(n + l, n) * c[n + l] for l in range(N - n + 1)]
        if backend is Backend.FLOAT:
            probs.append(math.fsum(terms))
        else:
            probs.append(sum(terms[1:], terms[0]))

    accuracy = error_bound(N, params)
    result = DistApprox(params=params, order_N=N, probs=tuple(probs), zeta=accuracy.zeta, bound=accuracy.value)
    if result.negative_mass:
        logger.warning("P^(%d) has negative entries at tau=%r, theta=%r", N, params.tau, params.theta)
    return result


def poisson_limit(n: int, params: ModelParams) -> float:
    """(1/n!) mu^n e^{−mu} with mu = sigma t_phys / nu."""
    if n < 0:
        raise ContractViolationError("poisson_limit", f"n must be non-negative, got {n}")
    mu = params.mean_energy
    if mu == 0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(mu) - mu - math.lgamma(n + 1))


class TailEstimate(NamedTuple):
    exact: float
    estimate: float


def tail_series_bound(N: int, zeta_value: float, n: int) -> TailEstimate:
    """Σ_{l≥N} l!/(l−n)! zeta^l and its estimate n!(2 zeta)^N / (1 − 2 zeta)."""
    if not 0 <= zeta_value < 0.5:
        raise ContractViolationError("tail_series_bound", f"zeta must lie in [0, 1/2), got {zeta_value!r}")
    if N < 0 or n < 0:
        raise ContractViolationError("tail_series_bound", "N and n must be non-negative", {"N": N, "n": n})
    estimate = math.factorial(n) * (2.0 * zeta_value) ** N / (1.0 - 2.0 * zeta_value)
    if zeta_value == 0:
        return TailEstimate(exact=1.0 if N == 0 and n == 0 else 0.0, estimate=estimate)

    start = max(N, n)
    term = math.perm(start, n) * zeta_value ** start
    total = term
    l = start
    while term > 1e-17 * total:
        term *= zeta_value * (l + 1) / (l + 1 - n)
        total += term
        l += 1
    return TailEstimate(exact=total, estimate=estimate)


def sweep(orders: Sequence[int], params_grid: Iterable[ModelParams]) -> Iterator[Dict[str, Any]]:
    """Long-format rows, one per (parameter point, N, n)."""
    for params in params_grid:
        for N in orders:
            dist = approx_dist(N, params)
            for row in dist.as_rows():
                yield {
                    "nu": params.nu,
                    "sigma": params.sigma,
                    "t_phys": params.t_phys,
                    "tau": params.tau,
                    "theta": params.theta,
                    "N": N,
                    **row,
                    "zeta": dist.zeta,
                    "bound": dist.bound,
                    "negative_mass": dist.negative_mass,
                }
