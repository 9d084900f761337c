"""Auxiliary coefficients, the X sequence and the moments of J."""

from photocount.moments.coefficients import AuxCoeffs, select_route, uv_closed, uv_direct, w_closed, w_coeffs
from photocount.moments.engine import (
    IdentityCheck,
    MomentTable,
    derivative_identity,
    gen_func,
    moment_bound,
    moments,
    x_by_compositions,
    x_coeffs,
)
from photocount.moments.params import EvalPoint, ModelParams
from photocount.moments.rpoly import RPolyTable, build_r_polys

__all__ = [
    "AuxCoeffs",
    "EvalPoint",
    "IdentityCheck",
    "ModelParams",
    "MomentTable",
    "RPolyTable",
    "build_r_polys",
    "derivative_identity",
    "gen_func",
    "moment_bound",
    "moments",
    "select_route",
    "uv_closed",
    "uv_direct",
    "w_closed",
    "w_coeffs",
    "x_by_compositions",
    "x_coeffs",
]
