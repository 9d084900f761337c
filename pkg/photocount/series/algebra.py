"""
Commutative convolution algebra of power-series coefficient sequences.

A ``CoeffSeq`` holds components a_0..a_M of a series truncated at order M.
Sequences are immutable; every operation returns a new sequence in the same
backend. Mixed orders are aligned by zero-padding (see :func:`align`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Iterable, Iterator, Optional, Tuple

import numpy as np

from photocount.exceptions import ContractViolationError, NotInvertibleError
from photocount.types import Backend, Scalar, mp_context, mpf_from_fraction, to_fraction


@dataclass(frozen=True)
class _Arithmetic:
    coerce: Callable[[Any], Scalar]
    is_finite: Callable[[Scalar], bool]
    total: Callable[[Iterable[Scalar]], Scalar]
    zero: Scalar
    one: Scalar


def _float_coerce(value: Any) -> float:
    if isinstance(value, Fraction):
        return value.numerator / value.denominator
    return float(value)


_FLOAT = _Arithmetic(
    coerce=_float_coerce,
    is_finite=math.isfinite,
    total=math.fsum,
    zero=0.0,
    one=1.0,
)

_EXACT = _Arithmetic(
    coerce=to_fraction,
    is_finite=lambda _: True,
    total=lambda xs: sum(xs, Fraction(0)),
    zero=Fraction(0),
    one=Fraction(1),
)


@lru_cache(maxsize=16)
def _mp_arithmetic(dps: int) -> _Arithmetic:
    ctx = mp_context(dps)

    def coerce(value: Any):
        if isinstance(value, Fraction):
            return mpf_from_fraction(ctx, value)
        return ctx.mpf(value)

    return _Arithmetic(
        coerce=coerce,
        is_finite=ctx.isfinite,
        total=ctx.fsum,
        zero=ctx.mpf(0),
        one=ctx.mpf(1),
    )


def _arithmetic(backend: Backend, dps: Optional[int]) -> _Arithmetic:
    if backend is Backend.FLOAT:
        return _FLOAT
    if backend is Backend.EXACT:
        return _EXACT
    return _mp_arithmetic(dps or 50)


@dataclass(frozen=True)
class CoeffSeq:
    """Truncated coefficient sequence ⟨a_0, ..., a_M⟩."""

    coeffs: Tuple[Scalar, ...]
    backend: Backend = Backend.FLOAT
    dps: Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        backend = Backend(self.backend)
        object.__setattr__(self, "backend", backend)
        if backend is Backend.MULTIPRECISION and self.dps is None:
            object.__setattr__(self, "dps", 50)
        values = tuple(self.coeffs)
        if not values:
            raise ContractViolationError("CoeffSeq", "at least one coefficient (order 0) is required")
        arith = self._arith
        values = tuple(arith.coerce(v) for v in values)
        for k, v in enumerate(values):
            if not arith.is_finite(v):
                raise ContractViolationError("CoeffSeq", f"coefficient a_{k} is not finite", {"value": repr(v)})
        object.__setattr__(self, "coeffs", values)

    # -- construction -------------------------------------------------------

    @classmethod
    def of(cls, values: Iterable[Any], backend: Backend = Backend.FLOAT, dps: Optional[int] = None) -> "CoeffSeq":
        return cls(tuple(values), backend, dps)

    @classmethod
    def zeros(cls, order: int, backend: Backend = Backend.FLOAT, dps: Optional[int] = None) -> "CoeffSeq":
        _check_order(order)
        arith = _arithmetic(Backend(backend), dps)
        return cls((arith.zero,) * (order + 1), backend, dps)

    @classmethod
    def unit(cls, order: int, backend: Backend = Backend.FLOAT, dps: Optional[int] = None) -> "CoeffSeq":
        """The algebra unit E = ⟨1, 0, 0, ...⟩."""
        _check_order(order)
        arith = _arithmetic(Backend(backend), dps)
        return cls((arith.one,) + (arith.zero,) * order, backend, dps)

    # -- views --------------------------------------------------------------

    @property
    def _arith(self) -> _Arithmetic:
        return _arithmetic(self.backend, self.dps)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def in_ideal(self) -> bool:
        """True when a_0 == 0, i.e. the sequence lies in the ideal 𝔏₀."""
        return self.coeffs[0] == 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Scalar:
        return self.coeffs[k]

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.coeffs)

    def to_floats(self) -> Tuple[float, ...]:
        return tuple(_float_coerce(c) for c in self.coeffs)

    def with_backend(self, backend: Backend, dps: Optional[int] = None) -> "CoeffSeq":
        return CoeffSeq(self.coeffs, backend, dps)

    def _like(self, values: Iterable[Scalar]) -> "CoeffSeq":
        return CoeffSeq(tuple(values), self.backend, self.dps)

    # -- linear structure ---------------------------------------------------

    def pad(self, order: int) -> "CoeffSeq":
        """Embed into a higher truncation order by zero-padding."""
        if order < self.order:
            raise ContractViolationError("pad", f"cannot pad order {self.order} down to {order}")
        return self._like(self.coeffs + (self._arith.zero,) * (order - self.order))

    def truncate(self, order: int) -> "CoeffSeq":
        _check_order(order)
        if order > self.order:
            return self.pad(order)
        return self._like(self.coeffs[: order + 1])

    def scale(self, factor: Any) -> "CoeffSeq":
        c = self._arith.coerce(factor)
        return self._like(c * a for a in self.coeffs)

    def __add__(self, other: "CoeffSeq") -> "CoeffSeq":
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        a, b = align(self, other)
        return a._like(x + y for x, y in zip(a.coeffs, b.coeffs))

    def __sub__(self, other: "CoeffSeq") -> "CoeffSeq":
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        a, b = align(self, other)
        return a._like(x - y for x, y in zip(a.coeffs, b.coeffs))

    def __neg__(self) -> "CoeffSeq":
        return self._like(-a for a in self.coeffs)

    def __mul__(self, other: Any) -> "CoeffSeq":
        if isinstance(other, CoeffSeq):
            return convolve(*align(self, other))
        return self.scale(other)

    def __rmul__(self, other: Any) -> "CoeffSeq":
        return self.scale(other)


def _check_order(order: int) -> None:
    if order < 0:
        raise ContractViolationError("CoeffSeq", f"order must be non-negative, got {order}")


def align(a: CoeffSeq, b: CoeffSeq) -> Tuple[CoeffSeq, CoeffSeq]:
    """Zero-pad the lower-order operand so both share one truncation order."""
    if a.backend is not b.backend:
        raise ContractViolationError("align", f"backend mismatch: {a.backend.value} vs {b.backend.value}")
    order = max(a.order, b.order)
    return a.pad(order), b.pad(order)


def convolve(a: CoeffSeq, b: CoeffSeq) -> CoeffSeq:
    """(A∘B)_k = Σ_{j≤k} a_j b_{k−j}, truncated at the common order."""
    if a.order != b.order:
        raise ContractViolationError(
            "convolve", f"order mismatch: {a.order} vs {b.order}",
            {"left_order": a.order, "right_order": b.order},
        )
    if a.backend is not b.backend:
        raise ContractViolationError("convolve", f"backend mismatch: {a.backend.value} vs {b.backend.value}")
    m = a.order
    if a.backend is Backend.FLOAT:
        full = np.convolve(np.asarray(a.coeffs, dtype=float), np.asarray(b.coeffs, dtype=float))
        return a._like(full[: m + 1].tolist())
    total = a._arith.total
    return a._like(
        total(a.coeffs[j] * b.coeffs[k - j] for j in range(k + 1))
        for k in range(m + 1)
    )


def power(a: CoeffSeq, n: int) -> CoeffSeq:
    """n-fold convolution power; power(A, 0) is the unit at A's order."""
    if n < 0:
        raise ContractViolationError("power", f"exponent must be non-negative, got {n}")
    result = CoeffSeq.unit(a.order, a.backend, a.dps)
    base = a
    while n:
        if n & 1:
            result = convolve(result, base)
        n >>= 1
        if n:
            base = convolve(base, base)
    return result


def power_components(a: CoeffSeq, n: int) -> CoeffSeq:
    """The n-th power by summing over compositions k_1 + ... + k_n = m.

    Exponential in the order; intended for cross-checking :func:`power`
    on small sequences.
    """
    if n < 0:
        raise ContractViolationError("power_components", f"exponent must be non-negative, got {n}")
    if n == 0:
        return CoeffSeq.unit(a.order, a.backend, a.dps)
    arith = a._arith
    values = []
    for m in range(a.order + 1):
        terms = []
        for parts in _weak_compositions(m, n):
            prod = arith.one
            for k in parts:
                prod = prod * a.coeffs[k]
            terms.append(prod)
        values.append(arith.total(terms))
    return a._like(values)


def _weak_compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    # stars and bars: choose parts-1 bar positions among total+parts-1 slots
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def inverse(a: CoeffSeq) -> CoeffSeq:
    """A^{-1} with (A^{-1})_0 = 1/a_0 and (A^{-1})_n = −(1/a_0) Σ_{k=1}^{n} a_k (A^{-1})_{n−k}."""
    if a.coeffs[0] == 0:
        raise NotInvertibleError({"order": a.order})
    arith = a._arith
    inv0 = arith.one / a.coeffs[0]
    out = [inv0]
    for n in range(1, a.order + 1):
        acc = arith.total(a.coeffs[k] * out[n - k] for k in range(1, n + 1))
        out.append(-inv0 * acc)
    return a._like(out)


def geometric_resolvent(a: CoeffSeq, order: Optional[int] = None) -> CoeffSeq:
    """(E − A)^{-1} = Σ_{n=0}^{M} A^n for A in the ideal 𝔏₀, truncated at M."""
    if not a.in_ideal:
        raise ContractViolationError(
            "geometric_resolvent", "argument must have a vanishing constant term",
            {"a0": repr(a.coeffs[0])},
        )
    m = a.order if order is None else order
    a = a.truncate(m)
    acc = CoeffSeq.unit(m, a.backend, a.dps)
    term = acc
    for _ in range(m):
        term = convolve(term, a)
        acc = acc + term
    return acc


def evaluate(a: CoeffSeq, z: Any) -> Scalar:
    """Σ_{k=0}^{M} a_k z^k by Horner's scheme."""
    result = a._arith.zero
    for coeff in reversed(a.coeffs):
        result = result * z + coeff
    return result

