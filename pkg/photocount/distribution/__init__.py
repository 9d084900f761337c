"""Mandel distribution approximations, their accuracy bound and supporting estimates."""

from photocount.distribution.approx import (
    AccuracyBound,
    DistApprox,
    TailEstimate,
    approx_dist,
    error_bound,
    poisson_limit,
    sweep,
    tail_series_bound,
    zeta,
)
from photocount.distribution.inequalities import (
    InequalityCheck,
    InequalityReport,
    inequality_suite,
    x_bound_ratio,
    x_bound_ratio_limit,
)
from photocount.distribution.special import BesselPack, bessel_i0, bessel_i1, psi

__all__ = [
    "AccuracyBound",
    "BesselPack",
    "DistApprox",
    "InequalityCheck",
    "InequalityReport",
    "TailEstimate",
    "approx_dist",
    "bessel_i0",
    "bessel_i1",
    "error_bound",
    "inequality_suite",
    "poisson_limit",
    "psi",
    "sweep",
    "tail_series_bound",
    "x_bound_ratio",
    "x_bound_ratio_limit",
    "zeta",
]
