from fractions import Fraction

import pytest

from photocount.exceptions import ContractViolationError
from photocount.moments import build_r_polys, derivative_identity

F = Fraction


@pytest.fixture(scope="module")
def table():
    return build_r_polys(12)


def test_row_zero_is_one(table):
    assert table.row(0, +1) == (F(1),)
    assert table.row(0, -1) == (F(1),)


@pytest.mark.parametrize(
    "m, plus, minus",
    [
        (1, (0, F(1, 2)), (0, F(-1, 2))),
        # (T/2^3)(T ∓ 1)
        (2, (0, F(-1, 8), F(1, 8)), (0, F(1, 8), F(1, 8))),
        # ±(T/(2^4·3))(T^2 ∓ 3T + 3)
        (3, (0, F(3, 48), F(-3, 48), F(1, 48)), (0, F(-3, 48), F(-3, 48), F(-1, 48))),
        # (T/(2^7·3))(T^3 ∓ 6T^2 + 15T ∓ 15)
        (4, (0, F(-15, 384), F(15, 384), F(-6, 384), F(1, 384)),
            (0, F(15, 384), F(15, 384), F(6, 384), F(1, 384))),
    ],
)
def test_low_order_polynomials(table, m, plus, minus):
    assert table.row(m, +1) == tuple(F(c) for c in plus)
    assert table.row(m, -1) == tuple(F(c) for c in minus)


@pytest.mark.parametrize("m", range(13))
def test_degree_is_exactly_m(table, m):
    assert table.degree(m, +1) == m
    assert table.degree(m, -1) == m


@pytest.mark.parametrize("m", range(13))
def test_sign_symmetry(table, m):
    plus = table.row(m, +1)
    minus = table.row(m, -1)
    # R_m^-(T) == R_m^+(-T)
    assert minus == tuple((-1) ** k * c for k, c in enumerate(plus))


def test_row_out_of_range(table):
    with pytest.raises(ContractViolationError):
        table.row(13, +1)


def test_negative_order_rejected():
    with pytest.raises(ContractViolationError):
        build_r_polys(-1)


def test_table_is_cached():
    assert build_r_polys(5) is build_r_polys(5)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
@pytest.mark.parametrize("sign", [+1, -1])
@pytest.mark.parametrize("tau", [0.5, 1.5])
def test_derivative_identity(table, m, sign, tau):
    check = derivative_identity(m, sign, tau, table)
    assert check.rel_error < 1e-12
