import math

import pytest

from photocount.distribution import (
    InequalityCheck,
    InequalityReport,
    inequality_suite,
    x_bound_ratio,
    x_bound_ratio_limit,
)
from photocount.distribution.inequalities import (
    FACTORIAL,
    LOG_BOUND,
    PREFACTOR,
    TAIL_BOUND,
    U_BOUND,
    V_BOUND,
    W_BOUND,
    X_BOUND,
)
from photocount.distribution.special import bessel_i0
from photocount.exceptions import ContractViolationError, InequalityViolationError


@pytest.mark.parametrize("tau", [0.1, 0.5, 1.0, 2.0])
def test_suite_passes(tau):
    report = inequality_suite(30, tau)
    assert report.passed, [c.to_dict() for c in report.failures]


def test_suite_contents():
    report = inequality_suite(5, 1.0)
    assert len(report.by_lemma(LOG_BOUND)) == 51
    assert len(report.by_lemma(PREFACTOR)) == 1
    for lemma in (FACTORIAL, U_BOUND, V_BOUND, W_BOUND):
        assert [c.m for c in report.by_lemma(lemma)] == [1, 2, 3, 4, 5]
    assert [c.m for c in report.by_lemma(X_BOUND)] == [2, 3, 4, 5]


def test_suite_checks_tail_series():
    report = inequality_suite(5, 1.0)
    tails = report.by_lemma(TAIL_BOUND)
    # three zeta values, n = 0..N for each N = 1..5
    assert len(tails) == 3 * sum(N + 1 for N in range(1, 6))
    assert all(0 < c.lhs <= c.rhs for c in tails)
    first = tails[0]
    assert first.m == 1
    assert first.lhs == pytest.approx(0.1 / 0.9)
    assert first.rhs == pytest.approx(0.2 / 0.8)


def test_factorial_example():
    check = inequality_suite(2, 1.0).by_lemma(FACTORIAL)[1]
    assert check.lhs == pytest.approx(1 / 24)
    assert check.rhs == pytest.approx(math.e / 32)


def test_log_bound_endpoint():
    last = inequality_suite(2, 1.0).by_lemma(LOG_BOUND)[-1]
    assert last.lhs == -1.0
    assert last.rhs == pytest.approx(math.log(0.5))


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_x_ratio_small_tau_limit(m):
    assert x_bound_ratio(m, 1e-3) == pytest.approx(x_bound_ratio_limit(m), rel=2e-2)


def test_x_ratio_limit_value():
    assert x_bound_ratio_limit(2) == pytest.approx((math.e * bessel_i0(2.0) / 2) ** 2)


def test_x_ratio_needs_m_above_one():
    with pytest.raises(ContractViolationError):
        x_bound_ratio(1, 0.5)


@pytest.mark.parametrize("max_m, tau", [(1, 1.0), (5, 0.0), (5, -1.0), (5, float("nan"))])
def test_suite_arguments(max_m, tau):
    with pytest.raises(ContractViolationError):
        inequality_suite(max_m, tau)


def test_strict_check_fails_on_equality():
    assert InequalityCheck(W_BOUND, 1, 1.0, lhs=2.0, rhs=2.0).passed
    assert not InequalityCheck(W_BOUND, 1, 1.0, lhs=2.0, rhs=2.0, strict=True).passed


def test_raise_for_failure():
    report = InequalityReport(max_m=3, tau=0.7)
    report.checks.append(InequalityCheck(U_BOUND, 3, 0.7, lhs=1.0, rhs=2.0))
    report.raise_for_failure()
    report.checks.append(InequalityCheck(X_BOUND, 3, 0.7, lhs=3.0, rhs=2.0, strict=True))
    with pytest.raises(InequalityViolationError) as info:
        report.raise_for_failure()
    assert info.value.lemma == X_BOUND
    assert info.value.m == 3
    assert info.value.context["margin"] == pytest.approx(-0.5)
