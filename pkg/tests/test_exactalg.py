import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqsums.core import Params
from sqsums.evalnum import s_closed
from sqsums.exactalg import (
    HeunParams,
    RationalFn,
    RationalPoly,
    UnsupportedFamilyError,
    eq_f,
    eq_g,
    eq_j,
    eq_s,
    eq_u,
    f_poly_direct,
    f_poly_parseval,
    f_value,
    g_rational,
    g_series_coeffs,
    g_value,
    heun_residual,
    j_rational,
    j_series_coeffs,
    j_value,
    ode_residual_poly,
    recurrence_check,
    recurrence_residuals,
    u_rational,
    u_value,
)

X = RationalPoly.x()

small_fracs = st.fractions(min_value=-4, max_value=4, max_denominator=8)
small_polys = st.lists(small_fracs, min_size=0, max_size=5).map(RationalPoly)


class TestRationalPoly:
    def test_trimming_and_degree(self):
        assert RationalPoly([1, 2, 0, 0]).degree == 1
        assert RationalPoly([]).degree == -1
        assert RationalPoly([0]).is_zero

    @given(small_polys, small_polys, small_polys)
    def test_ring_distributivity(self, p, q, r):
        assert (p + q) * r == p * r + q * r

    @given(small_polys, small_polys)
    def test_product_rule(self, p, q):
        lhs = (p * q).derivative()
        assert lhs == p.derivative() * q + p * q.derivative()

    @given(small_polys, st.integers(min_value=0, max_value=4))
    def test_power_is_repeated_product(self, p, k):
        acc = RationalPoly.one()
        for _ in range(k):
            acc = acc * p
        assert p ** k == acc

    def test_linear_division(self):
        p = (X - 3) * (X + 2) * (X - 3)
        q, rem = p.divmod_linear(Fraction(3))
        assert rem == 0
        assert q == (X - 3) * (X + 2)

    def test_evaluation_types(self):
        p = RationalPoly([1, -2, 2])
        assert p(Fraction(1, 4)) == Fraction(5, 8)
        assert p(0.25) == pytest.approx(0.625)

    def test_compose_linear(self):
        p = RationalPoly([0, 0, 1], "s")  # s^2
        assert p.compose_linear(1, Fraction(-1, 2)) == RationalPoly([Fraction(1, 4), -1, 1])

    def test_variable_mismatch_rejected(self):
        with pytest.raises(ValueError):
            RationalPoly([1, 1], "s") * RationalPoly([1, 1], "x")

    def test_json_roundtrip(self):
        p = RationalPoly([Fraction(1, 3), 0, -2], "u")
        blob = json.dumps(p.to_json())
        assert RationalPoly.from_json(json.loads(blob)) == p


class TestRationalFn:
    def test_reduction(self):
        f = RationalFn((X + 1) * (X - 1), (X - 1) * (X - 1))
        assert f == RationalFn(X + 1, X - 1)

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            RationalFn(X, RationalPoly.zero())

    @given(small_polys, small_polys.filter(lambda p: not p.is_zero))
    @settings(max_examples=60)
    def test_multiply_then_divide(self, p, q):
        f = RationalFn(p, q)
        g = RationalFn(q)
        assert (f * g) == RationalFn(p)

    def test_quotient_rule(self):
        f = RationalFn(X * X + 1, X + 2)
        d = f.derivative()
        num = (X * X + 1).derivative() * (X + 2) - (X * X + 1)
        assert d == RationalFn(num, (X + 2) * (X + 2))

    def test_mobius_inverse_roundtrip(self):
        f = RationalFn(X * X - X + 2, X + 3)
        g = f.compose_mobius(1, 0, 1, 1).compose_mobius(1, 0, -1, 1)
        assert g == f

    def test_pole_evaluation_raises(self):
        f = RationalFn(RationalPoly.one(), X - 1)
        with pytest.raises(ZeroDivisionError):
            f(Fraction(1))

    def test_json_roundtrip(self):
        f = RationalFn(X * X + 1, 2 * X + 1)
        blob = json.dumps(f.to_json())
        assert RationalFn.from_json(json.loads(blob)) == f

    def test_reduction_beyond_candidate_roots(self):
        # the common factor x^2 - 2 has irrational roots, so the fast
        # deflation path cannot see it; the remainder-sequence gcd must
        common = X * X - 2
        f = RationalFn(common * (X + 1), common * (X + 3))
        assert f == RationalFn(X + 1, X + 3)

    def test_coprime_with_irrational_roots_stays_put(self):
        f = RationalFn(X * X - 2, X * X - 3)
        assert f.num == X * X - 2
        assert f.den == X * X - 3

    def test_denominator_normalization(self):
        # den stored primitive-integer with positive leading coefficient
        f = RationalFn(X, RationalPoly([Fraction(-1, 3), Fraction(-2, 3)]))
        assert f.den == RationalPoly([1, 2])
        assert f.num == -3 * X


def _shift_to_centered(p: RationalPoly) -> RationalPoly:
    """Oracle direction: move the monomial form into the centered variable."""
    return p.compose_linear(1, Fraction(1, 2))


class TestBernsteinPolys:
    def test_smallest_cases(self):
        assert f_poly_direct(1) == RationalPoly([1, -2, 2])
        assert f_poly_direct(0) == RationalPoly([1])

    def test_value_anchor_and_midpoint(self):
        for n in range(1, 12):
            assert f_poly_direct(n)(Fraction(0)) == 1
        assert f_poly_direct(2)(Fraction(1, 2)) == Fraction(3, 8)

    def test_centered_small_cases(self):
        assert f_poly_parseval(1) == RationalPoly([Fraction(1, 2), 0, 2], "s")
        # independent oracle: change of variable from the direct expansion
        expected = _shift_to_centered(f_poly_direct(2))
        assert expected == RationalPoly([Fraction(3, 8), 0, 1, 0, 6])
        assert f_poly_parseval(2) == RationalPoly([Fraction(3, 8), 0, 1, 0, 6], "s")

    def test_centered_constant_term(self):
        for n in range(1, 15):
            assert f_poly_parseval(n).coeff(0) == Fraction(math.comb(2 * n, n), 4 ** n)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13])
    def test_two_constructions_agree(self, n):
        assert f_poly_parseval(n).compose_linear(1, Fraction(-1, 2)) == f_poly_direct(n)

    def test_even_powers_only_and_positive(self):
        for n in range(1, 20):
            p = f_poly_parseval(n)
            assert all(p.coeff(2 * k + 1) == 0 for k in range(n))
            assert all(p.coeff(2 * k) > 0 for k in range(n + 1))

    def test_symmetry_about_midpoint(self):
        for n in (1, 4, 9):
            p = f_poly_direct(n)
            assert p.compose_linear(-1, 1) == p  # F(1-x) = F(x)

    def test_f_value_matches_poly(self):
        assert f_value(2, Fraction(1, 4)) == Fraction(59, 128)
        assert f_value(2, 0.25) == pytest.approx(0.4609375, rel=1e-15)


class TestRecurrences:
    @pytest.mark.parametrize("n", [1, 2, 3, 7])
    def test_hold_exactly(self, n):
        assert recurrence_check(n)

    def test_injected_fault_detected(self):
        n = 3
        f_prev, f_n, f_next = f_poly_direct(n - 1), f_poly_direct(n), f_poly_direct(n + 1)
        bad = f_n + RationalPoly([Fraction(1, 10 ** 6)])
        residuals = recurrence_residuals(f_prev, bad, f_next, n)
        assert not all(r.is_zero for r in residuals)


class TestOdeResiduals:
    def test_bernstein_solution(self):
        assert ode_residual_poly(f_poly_direct(1), eq_f(1)).is_zero
        assert ode_residual_poly(f_poly_direct(4), eq_f(4)).is_zero

    def test_baskakov_solution(self):
        assert ode_residual_poly(g_rational(1), eq_g(1)).is_zero
        assert ode_residual_poly(g_rational(5), eq_g(5)).is_zero

    def test_mkz_and_bbh_solutions(self):
        assert ode_residual_poly(j_rational(0), eq_j(0)).is_zero
        assert ode_residual_poly(j_rational(4), eq_j(4)).is_zero
        assert ode_residual_poly(u_rational(3), eq_u(3)).is_zero

    def test_constant_is_not_a_solution(self):
        res = ode_residual_poly(RationalPoly.one(), eq_f(1))
        assert res == RationalFn(RationalPoly([2, -4]))  # 2n(1-2x) at n=1

    def test_general_equation_matches_special_cases(self):
        spec = eq_s(Params(3, -1))
        assert ode_residual_poly(f_poly_direct(3), spec).is_zero
        spec = eq_s(Params(2, 1))
        assert ode_residual_poly(g_rational(2), spec).is_zero

    def test_general_equation_rejects_other_c(self):
        with pytest.raises(UnsupportedFamilyError):
            eq_s(Params(2, 2))

    @given(small_polys, small_polys)
    @settings(max_examples=40)
    def test_linearity(self, y1, y2):
        spec = eq_f(2)
        lhs = ode_residual_poly(y1 + y2, spec)
        assert lhs == ode_residual_poly(y1, spec) + ode_residual_poly(y2, spec)


class TestHeun:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_polynomial_solutions(self, n):
        hp = HeunParams.polynomial_case(n)
        assert (hp.beta, hp.epsilon, hp.q) == (-2 * n, -2 * n, -n)
        assert heun_residual(f_poly_direct(n), hp).is_zero

    @pytest.mark.parametrize("n", [1, 2])
    def test_rational_solutions_with_reflected_argument(self, n):
        hp = HeunParams.rational_case(n)
        assert (hp.beta, hp.epsilon, hp.q) == (2 * n, 2 * n, n)
        assert heun_residual(g_rational(n), hp, "negate").is_zero

    def test_generic_parameters_reject_linear(self):
        hp = HeunParams(1, 3, 1, 1, 4, 2)
        assert not heun_residual(X, hp).is_zero

    def test_consistency_constraint_of_families(self):
        for n in (1, 5):
            for hp in (HeunParams.polynomial_case(n), HeunParams.rational_case(n)):
                assert hp.gamma + hp.delta + hp.epsilon == hp.alpha + hp.beta + 1

    def test_malformed_parameters_rejected(self):
        from sqsums.core import ParameterError

        with pytest.raises(ParameterError):
            HeunParams(1.5e-310, "x", 1, 1, 1, 1)

    def test_unknown_transform_rejected(self):
        with pytest.raises(ValueError):
            heun_residual(X, HeunParams.polynomial_case(1), "reflect")


def _geom_sq_sum_baskakov(n: int, x: Fraction, terms: int = 400) -> Fraction:
    """Oracle: direct summation of the defining squared series (truncated).

    Exact rational partial sum; the tail is geometric with ratio
    (x/(1+x))^2 < 1, far below any coefficient difference this certifies.
    """
    total = Fraction(0)
    for k in range(terms):
        total += (Fraction(math.comb(n + k - 1, k)) * x ** k / (1 + x) ** (n + k)) ** 2
    return total


class TestRationalFamilies:
    def test_baskakov_small_cases(self):
        assert g_rational(1) == RationalFn(RationalPoly.one(), 2 * X + 1)
        expected = RationalFn(2 * X * X + 2 * X + 1, (2 * X + 1) ** 3)
        assert g_rational(2) == expected

    def test_baskakov_u_series_n3(self):
        # derived through the n=2 Meyer-Konig-Zeller series and the
        # substitution bridge, which fixes the squared factorial weight
        assert g_series_coeffs(3) == RationalPoly(
            [0, Fraction(3, 8), 0, Fraction(1, 4), 0, Fraction(3, 8)], "u"
        )

    def test_baskakov_matches_defining_series(self):
        x = Fraction(1, 3)
        for n in (1, 2, 4):
            approx = _geom_sq_sum_baskakov(n, x)
            assert abs(g_rational(n)(x) - approx) < Fraction(1, 10 ** 60)

    def test_mkz_small_cases(self):
        assert j_rational(0) == RationalFn(1 - X, 1 + X)
        assert j_series_coeffs(2) == RationalPoly(
            [0, Fraction(3, 8), 0, Fraction(1, 4), 0, Fraction(3, 8)], "w"
        )

    def test_mkz_value_at_origin(self):
        for n in range(0, 12):
            assert j_rational(n)(Fraction(0)) == 1

    def test_bbh_small_cases(self):
        assert u_rational(1) == RationalFn(X * X + 1, (X + 1) ** 2)

    def test_bbh_anchors(self):
        for n in (1, 2, 5, 9):
            assert u_rational(n)(Fraction(0)) == 1
            assert u_rational(n)(Fraction(1)) == Fraction(math.comb(2 * n, n), 4 ** n)

    @pytest.mark.parametrize("n", [1, 2, 3, 6])
    def test_substitution_coherence(self, n):
        # J_(n-1)(x/(1+x)) reproduces G_n and G_(n+1)(x/(1-x)) reproduces J_n
        assert g_rational(n) == j_rational(n - 1).compose_mobius(1, 0, 1, 1)
        assert j_rational(n) == g_rational(n + 1).compose_mobius(1, 0, -1, 1)

    @pytest.mark.parametrize("n", [1, 3, 7])
    def test_numerical_coherence_with_closed_form(self, n):
        params = Params(n, 1)
        for x in (0.05, 0.8, 3.7, 11.0):
            exact = g_rational(n)(x)
            closed = s_closed(params, x).value
            assert closed == pytest.approx(exact, rel=1e-12)

    def test_value_helpers_match_rational_forms(self):
        assert g_value(3, Fraction(2, 5)) == g_rational(3)(Fraction(2, 5))
        assert j_value(2, Fraction(1, 3)) == j_rational(2)(Fraction(1, 3))
        assert u_value(2, Fraction(3, 2)) == u_rational(2)(Fraction(3, 2))
        assert g_value(3, 0.4) == pytest.approx(float(g_rational(3)(Fraction(2, 5))), rel=1e-14)

    def test_index_preconditions(self):
        with pytest.raises(ValueError):
            g_rational(0)
        with pytest.raises(ValueError):
            u_rational(0)
        j_rational(0)  # allowed from index 0
