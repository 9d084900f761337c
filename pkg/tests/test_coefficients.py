import math

import mpmath
import pytest
from asserts import NumericAssertions

from photocount.exceptions import ContractViolationError
from photocount.moments import build_r_polys, uv_closed, uv_direct, w_closed, w_coeffs
from photocount.moments.coefficients import select_route
from photocount.types import Backend, Route


@pytest.fixture(scope="module")
def table():
    return build_r_polys(14)


def _u_reference(m, tau):
    with mpmath.workdps(30):
        return mpmath.nsum(lambda n: tau ** (2 * n) / mpmath.factorial(2 * n) * mpmath.ff(n, m), [m, mpmath.inf])


class TestDirectSeries:
    def test_tau_zero(self):
        assert uv_direct(0, 0.0) == (1.0, 0.0)
        assert uv_direct(3, 0.0) == (0.0, 0.0)

    def test_m_zero_is_cosh_sinh(self):
        u, v = uv_direct(0, 1.0)
        assert u == pytest.approx(math.cosh(1.0), rel=1e-15)
        assert v == pytest.approx(math.sinh(1.0), rel=1e-15)

    def test_m_two_partial_sum(self):
        u, _ = uv_direct(2, 0.5)
        terms = [0.5 ** (2 * n) / math.factorial(2 * n) * math.perm(n, 2) for n in range(2, 9)]
        assert terms[0] == pytest.approx(0.005208333333333333)
        NumericAssertions.assert_rel_close(u, math.fsum(terms), 1e-13, "u_2(0.5)")
        # the leading term alone is 2.5% short
        assert u == pytest.approx(0.0053397096, rel=1e-8)
        assert u > 1.02 * terms[0]

    @pytest.mark.parametrize("m", [1, 4, 9])
    @pytest.mark.parametrize("tau", [0.3, 1.0, 2.5])
    def test_against_mpmath_sum(self, m, tau):
        u, _ = uv_direct(m, tau)
        NumericAssertions.assert_rel_close(u, _u_reference(m, tau), 1e-13, f"u_{m}({tau})")

    def test_nonnegative(self):
        for m in range(10):
            u, v = uv_direct(m, 0.7)
            assert u > 0 and v > 0

    def test_rejects_negative_tau(self):
        with pytest.raises(ContractViolationError):
            uv_direct(1, -0.1)

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ContractViolationError):
            uv_direct(1, 0.5, tol=0.0)

    def test_term_cap_logs_warning(self, caplog):
        with caplog.at_level("WARNING", logger="photocount.moments.coefficients"):
            uv_direct(0, 5.0, max_terms=3)
        assert "term cap" in caplog.text

    def test_multiprecision_backend(self):
        u, v = uv_direct(0, 1.0, backend=Backend.MULTIPRECISION, dps=40)
        with mpmath.workdps(40):
            assert abs(u - mpmath.cosh(1)) < mpmath.mpf(10) ** -35
            assert abs(v - mpmath.sinh(1)) < mpmath.mpf(10) ** -35


class TestClosedForm:
    def test_m_zero(self, table):
        u, v = uv_closed(0, 1.0, table)
        assert u == pytest.approx(math.cosh(1.0), rel=1e-15)
        assert v == pytest.approx(math.sinh(1.0), rel=1e-12)

    def test_m_three_agrees_with_direct(self, table):
        closed = uv_closed(3, 1.0, table)
        direct = uv_direct(3, 1.0, 1e-15)
        NumericAssertions.assert_rel_close(closed[0], direct[0], 1e-10, "u_3")
        NumericAssertions.assert_rel_close(closed[1], direct[1], 1e-10, "v_3")

    @pytest.mark.parametrize("tau", [0.05, 0.3, 0.8, 1.0, 1.2, 2.0, 3.0])
    def test_two_path_agreement(self, table, tau):
        for m in range(13):
            closed = uv_closed(m, tau, table)
            direct = uv_direct(m, tau)
            NumericAssertions.assert_rel_close(closed[0], direct[0], 1e-8, f"u_{m}({tau})")
            NumericAssertions.assert_rel_close(closed[1], direct[1], 1e-8, f"v_{m}({tau})")

    def test_needs_table_row_m_plus_one(self):
        with pytest.raises(ContractViolationError):
            uv_closed(3, 1.0, build_r_polys(3))

    def test_needs_positive_tau(self, table):
        with pytest.raises(ContractViolationError):
            uv_closed(1, 0.0, table)

    @pytest.mark.parametrize("m", [1, 2, 3, 7, 12])
    @pytest.mark.parametrize("tau", [0.1, 1.0, 2.5])
    def test_w_closed_matches_assembled(self, table, m, tau):
        aux = w_coeffs(12, tau)
        NumericAssertions.assert_rel_close(w_closed(m, tau, table), aux.w[m], 1e-10, f"w_{m}({tau})")

    def test_w_closed_starts_at_one(self, table):
        with pytest.raises(ContractViolationError):
            w_closed(0, 1.0, table)


class TestAuxCoeffs:
    def test_w_zero_vanishes(self):
        assert w_coeffs(4, 0.7).w[0] == 0

    @pytest.mark.parametrize("tau", [0.5, 1.0, 2.0, 3.5])
    def test_low_order_w(self, tau):
        w = w_coeffs(3, tau).w
        e2 = math.exp(-2 * tau)
        NumericAssertions.assert_rel_close(w[1], tau / 2, 1e-13, "w_1")
        NumericAssertions.assert_rel_close(w[2], (2 * tau**2 - 2 * tau + 1 - e2) / 16, 1e-10, "w_2")
        w3 = (2 * tau**3 - 6 * tau**2 + 9 * tau - 6 + 3 * (tau + 2) * e2) / 96
        NumericAssertions.assert_rel_close(w[3], w3, 1e-9, "w_3")

    def test_w2_at_tau_one(self):
        assert w_coeffs(2, 1.0).w[2] == pytest.approx((1 - math.exp(-2)) / 16, rel=1e-13)
        assert w_coeffs(2, 1.0).w[2] == pytest.approx(0.0540415448, rel=1e-9)

    @pytest.mark.parametrize("tau", [0.0, 0.4, 1.0, 2.0, 5.0])
    def test_normalization_identity(self, tau):
        assert float(w_coeffs(0, tau).normalization) == pytest.approx(1.0, rel=1e-12)

    def test_route_selection(self):
        assert select_route(0.5) is Route.DIRECT_SERIES
        assert select_route(1.0) is Route.DIRECT_SERIES
        assert select_route(1.5) is Route.CLOSED_FORM
        assert w_coeffs(3, 2.0).route is Route.CLOSED_FORM
        assert w_coeffs(3, 0.0, route=Route.CLOSED_FORM).route is Route.DIRECT_SERIES

    @pytest.mark.parametrize("tau", [0.8, 1.0, 1.2])
    def test_routes_agree_on_overlap(self, tau):
        direct = w_coeffs(12, tau, route=Route.DIRECT_SERIES)
        closed = w_coeffs(12, tau, route=Route.CLOSED_FORM)
        for m in range(1, 13):
            NumericAssertions.assert_rel_close(closed.w[m], direct.w[m], 1e-8, f"w_{m}({tau})")

    def test_exact_backend_is_refused(self):
        with pytest.raises(ContractViolationError):
            w_coeffs(2, 0.5, backend=Backend.EXACT)

    def test_multiprecision_agrees_with_float(self):
        mp_aux = w_coeffs(6, 1.7, backend=Backend.MULTIPRECISION, dps=40)
        float_aux = w_coeffs(6, 1.7)
        for m in range(1, 7):
            NumericAssertions.assert_rel_close(float(mp_aux.w[m]), float_aux.w[m], 1e-12, f"w_{m}")
