from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version as _dist_version


def _resolve_version() -> str:
    # installed distribution metadata when available, placeholder from a source tree
    try:
        return _dist_version("photocount")
    except PackageNotFoundError:
        return "0.0.0"


__version__: str = _resolve_version()

from photocount.distribution import (  # noqa: E402
    AccuracyBound,
    DistApprox,
    approx_dist,
    error_bound,
    inequality_suite,
    poisson_limit,
)
from photocount.exceptions import (  # noqa: E402
    ContractViolationError,
    DomainError,
    NotInvertibleError,
    NumericalDegradationError,
    PhotocountError,
)
from photocount.moments import EvalPoint, ModelParams, MomentTable, gen_func, moments  # noqa: E402
from photocount.series import CoeffSeq  # noqa: E402
from photocount.types import Backend, Route  # noqa: E402

__all__ = [
    "__version__",
    "AccuracyBound",
    "Backend",
    "CoeffSeq",
    "ContractViolationError",
    "DistApprox",
    "DomainError",
    "EvalPoint",
    "ModelParams",
    "MomentTable",
    "NotInvertibleError",
    "NumericalDegradationError",
    "PhotocountError",
    "Route",
    "approx_dist",
    "error_bound",
    "gen_func",
    "inequality_suite",
    "moments",
    "poisson_limit",
]
