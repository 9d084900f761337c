"""
Verification runs: a-priori estimates, two-route agreement, explicit
low-order formulas, normalization and (optionally) Monte-Carlo agreement.

Every check yields a :class:`VerifyCheck`; the run passes only if all do.
"""
from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from photocount.distribution import (
    approx_dist,
    error_bound,
    inequality_suite,
    x_bound_ratio,
    x_bound_ratio_limit,
)
from photocount.moments import (
    ModelParams,
    build_r_polys,
    gen_func,
    moments,
    uv_closed,
    uv_direct,
    w_coeffs,
    x_coeffs,
)
from photocount.simulation import (
    estimate_laplace,
    estimate_moments,
    estimate_pn,
    sample_energies_async,
)

logger = logging.getLogger(__name__)

DEFAULT_TAUS = (0.1, 0.5, 1.0, 2.0)
FIXTURE_TAUS = (0.1, 0.25, 0.5, 1.0, 2.0)
FIXTURE_RATIOS = (0.01, 0.1, 0.3)
OVERLAP_TAUS = (0.8, 0.9, 1.0, 1.1, 1.2)

FIXTURE_TOL = 1e-10
TWO_PATH_TOL = 1e-8
NORMALIZATION_TOL = 1e-12
ASYMPTOTIC_TAU = 1e-3
STDERR_WIDTH = 3.0


@dataclass
class VerifyCheck:
    name: str
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_row(self) -> Dict[str, Any]:
        return {"check": self.name, "passed": self.passed, **self.detail}


@dataclass
class VerificationReport:
    checks: List[VerifyCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[VerifyCheck]:
        return [c for c in self.checks if not c.passed]

    def rows(self) -> List[Dict[str, Any]]:
        return [c.to_row() for c in self.checks]


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# explicit low-order forms, written out independently of the recursions

def explicit_x(tau: float) -> List[float]:
    e2 = math.exp(-2.0 * tau)
    return [
        1.0,
        -tau / 2.0,
        (2 * tau**2 + 2 * tau - 1 + e2) / 16.0,
        -(2 * tau**3 + 6 * tau**2 + 3 * tau - 6 + 3 * (3 * tau + 2) * e2) / 96.0,
    ]


def explicit_probs(N: int, params: ModelParams) -> List[float]:
    tau = params.tau
    e2 = math.exp(-2.0 * tau)
    k = params.sigma / (2.0 * params.nu**2)
    a = 2 * tau**2 + 2 * tau - 1 + e2
    b = 2 * tau**3 + 6 * tau**2 + 3 * tau - 6 + 3 * (3 * tau + 2) * e2
    p1 = params.sigma * tau / params.nu**2
    if N == 0:
        return [1.0]
    if N == 1:
        return [1.0 - p1, p1]
    if N == 2:
        return [1.0 - p1 + k**2 * a, p1 - 2 * k**2 * a, k**2 * a]
    if N == 3:
        c3 = 2.0 / 3.0 * k**3 * b
        return [1.0 - p1 + k**2 * a - c3, p1 - 2 * k**2 * a + 2 * k**3 * b, k**2 * a - 2 * k**3 * b, c3]
    raise ValueError(f"explicit forms exist for N <= 3, got {N}")


def check_inequalities(taus: Sequence[float], max_m: int) -> List[VerifyCheck]:
    out = []
    for tau in taus:
        report = inequality_suite(max_m, tau)
        margins: Dict[str, float] = {}
        for check in report.checks:
            margins[check.lemma] = min(margins.get(check.lemma, math.inf), check.margin)
        out.append(VerifyCheck(
            f"inequalities[tau={tau:g}]",
            report.passed,
            {"tau": tau, "max_m": max_m, "failures": len(report.failures), "min_margin": min(margins.values())},
        ))
    return out


def check_x_asymptotics(max_m: int = 4) -> VerifyCheck:
    worst = 0.0
    ratios = []
    for m in range(2, max_m + 1):
        ratio = x_bound_ratio(m, ASYMPTOTIC_TAU)
        ratios.append(ratio)
        worst = max(worst, _rel(ratio, x_bound_ratio_limit(m)))
    passed = all(r >= 1.0 for r in ratios) and worst < 0.05
    return VerifyCheck("x-bound-asymptotics", passed, {"tau": ASYMPTOTIC_TAU, "max_rel_dev": worst})


def check_two_path(max_m: int = 12, taus: Sequence[float] = OVERLAP_TAUS) -> VerifyCheck:
    table = build_r_polys(max_m + 1)
    worst = 0.0
    for tau in taus:
        for m in range(max_m + 1):
            direct = uv_direct(m, tau)
            closed = uv_closed(m, tau, table)
            worst = max(worst, _rel(closed[0], direct[0]), _rel(closed[1], direct[1]))
    return VerifyCheck("two-path-agreement", worst <= TWO_PATH_TOL, {"max_rel_diff": worst, "max_m": max_m})


def check_fixtures() -> VerifyCheck:
    worst = 0.0
    for tau in FIXTURE_TAUS:
        x = x_coeffs(3, w_coeffs(3, tau))
        for got, want in zip(x, explicit_x(tau)):
            worst = max(worst, _rel(float(got), want))
        for ratio in FIXTURE_RATIOS:
            params = ModelParams.from_dimensionless(tau, ratio)
            for N in range(4):
                got_probs = approx_dist(N, params).probs
                for got, want in zip(got_probs, explicit_probs(N, params)):
                    worst = max(worst, _rel(float(got), want))
    return VerifyCheck("explicit-fixtures", worst <= FIXTURE_TOL, {"max_rel_err": worst})


def check_normalization(max_order: int = 8) -> VerifyCheck:
    worst = 0.0
    for tau in FIXTURE_TAUS:
        for ratio in FIXTURE_RATIOS:
            params = ModelParams.from_dimensionless(tau, ratio)
            for N in range(max_order + 1):
                worst = max(worst, abs(approx_dist(N, params).total - 1.0))
    return VerifyCheck("normalization", worst <= NORMALIZATION_TOL, {"max_abs_dev": worst})


async def check_monte_carlo(
    params: ModelParams,
    samples: int,
    steps: int,
    seed: int,
    orders: Sequence[int] = (2, 3),
    **options: Any,
) -> List[VerifyCheck]:
    energies = await sample_energies_async(params, samples, steps, seed, **options)
    out = []

    table = moments(2, params)
    for n, est in enumerate(estimate_moments(params, 2, samples, steps, seed, energies=energies)):
        if n == 0:
            continue
        margin = STDERR_WIDTH * est.stderr - abs(est.value - float(table.moments[n]))
        out.append(VerifyCheck(f"mc-moment[{n}]", margin >= 0, {"value": est.value, "stderr": est.stderr,
                                                                 "analytic": float(table.moments[n]), "margin": margin}))

    for N in orders:
        dist = approx_dist(N, params)
        bound = error_bound(N, params)
        estimates = estimate_pn(params, N, samples, steps, seed, energies=energies)
        for n, est in enumerate(estimates):
            if not bound.available:
                out.append(VerifyCheck(f"mc-pn[N={N},n={n}]", True, {"skipped": "bound unavailable", "zeta": bound.zeta}))
                continue
            margin = bound.value + STDERR_WIDTH * est.stderr - abs(est.value - float(dist.probs[n]))
            out.append(VerifyCheck(f"mc-pn[N={N},n={n}]", margin >= 0, {"value": est.value, "stderr": est.stderr,
                                                                       "analytic": float(dist.probs[n]), "margin": margin}))

    m1 = float(table.moments[1])
    if m1 > 0:
        for factor in (0.5, 1.0, 2.0):
            lam = factor / m1
            est = estimate_laplace(params, lam, samples, steps, seed, energies=energies)
            exact = gen_func(lam, params)
            margin = STDERR_WIDTH * est.stderr - abs(est.value - exact)
            out.append(VerifyCheck(f"mc-laplace[{factor:g}/M1]", margin >= 0, {"value": est.value, "stderr": est.stderr,
                                                                              "analytic": exact, "margin": margin}))
    return out


async def run_verification_async(
    *,
    taus: Sequence[float] = DEFAULT_TAUS,
    max_m: int = 30,
    params: Optional[ModelParams] = None,
    samples: Optional[int] = None,
    steps: int = 512,
    seed: int = 42,
    **options: Any,
) -> VerificationReport:
    report = VerificationReport()
    report.checks.extend(check_inequalities(taus, max_m))
    report.checks.append(check_x_asymptotics())
    report.checks.append(check_two_path())
    report.checks.append(check_fixtures())
    report.checks.append(check_normalization())
    if samples:
        params = params or ModelParams(nu=1.0, sigma=0.1, t_phys=0.5)
        report.checks.extend(await check_monte_carlo(params, samples, steps, seed, **options))
    logger.info("verification: %d checks, %d failed", len(report.checks), len(report.failures))
    return report


def run_verification(**kwargs: Any) -> VerificationReport:
    return asyncio.run(run_verification_async(**kwargs))
