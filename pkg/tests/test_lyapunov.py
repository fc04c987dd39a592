"""Lyapunov exponent: closed forms, recurrences, asymptotic regimes,
Pade resummation and the axis-density series, each validated against an
independent route (measure quadrature, exact formula at shifted
parameters, or plain algebra)."""

import math

import numpy as np
import pytest
from scipy import integrate

from rmprod.bessel import bessel_jy, bessel_k, log_derivative_order
from rmprod.exceptions import (DomainError, PoleError, UnsupportedOrderError)
from rmprod.lyapunov import (SeriesExpansion, asympt_large_s, asympt_small_s,
                             axis_density_series, axis_series_layers,
                             lambda_recurrence, lloyd_lyapunov,
                             lyapunov_exact, lyapunov_from_measure,
                             lyapunov_integer, pade_resum,
                             small_s_coefficients, small_s_series,
                             _alpha_beta)
from rmprod.measure import InvariantMeasure, ModelParams


class TestExact:
    def test_symmetry_in_alpha(self):
        a = lyapunov_exact(ModelParams(1.0, 1.0, math.pi / 5)).value
        b = lyapunov_exact(ModelParams(1.0, 1.0, -math.pi / 5)).value
        assert a == b

    def test_gig_closed_form(self):
        # integer p = 1 at alpha = 0: (s/2) K_0(2/s)/K_1(2/s)
        for s in (0.5, 1.0, 2.0):
            got = lyapunov_exact(ModelParams(1.0, s, 0.0)).value
            want = (s / 2.0) * (bessel_k(0.0, 2.0 / s)
                                / bessel_k(1.0, 2.0 / s)).real
            assert got == pytest.approx(want, rel=1e-11)

    def test_positivity_on_grid(self):
        for p in (0.5, 1.0, 3.0):
            for s in (0.1, 1.0, 10.0):
                for a in (0.0, math.pi / 3, math.pi / 2):
                    assert lyapunov_exact(ModelParams(p, s, a)).value > 0

    def test_measure_quadrature_oracle(self):
        params = ModelParams(1.0, 1.0, math.pi / 6)
        ex = lyapunov_exact(params).value
        qm = lyapunov_from_measure(InvariantMeasure(params)).value
        assert abs(ex - qm) < 1e-6


class TestIntegerClosedForm:
    def test_schrodinger_bessel_form(self):
        # n = 1, alpha = pi/2: (s/2) [J0 J1 + Y0 Y1]/[J1^2 + Y1^2] at 2/s
        s = 1.0
        J0, Y0 = bessel_jy(0.0, 2.0 / s)
        J1, Y1 = bessel_jy(1.0, 2.0 / s)
        want = (s / 2.0) * (J0 * J1 + Y0 * Y1) / (J1 * J1 + Y1 * Y1)
        got = lyapunov_integer(1, s, math.pi / 2).value
        assert got == pytest.approx(want, rel=1e-10)

    def test_matches_exact(self):
        got = lyapunov_integer(2, 1.0, 0.0).value
        want = lyapunov_exact(ModelParams(2.0, 1.0, 0.0)).value
        assert abs(got - want) < 1e-9

    def test_large_s_leading_behavior(self):
        # n = 1, alpha = 0: lambda ~ ln s + psi(1)
        s = 1e4
        got = lyapunov_integer(1, s, 0.0).value
        want = math.log(s) - 0.5772156649015329
        assert got == pytest.approx(want, abs=1e-2)

    def test_domain(self):
        with pytest.raises(DomainError):
            lyapunov_integer(0, 1.0, 0.0)
        with pytest.raises(DomainError):
            lyapunov_integer(17, 1.0, 0.0)


class TestLambdaRecurrence:
    def test_integer_base(self):
        w = 2.0 + 0.0j
        got = lambda_recurrence(3.0, w)
        want = log_derivative_order(3.0, w)
        assert abs(got - want) < 1e-8

    def test_fractional_climb(self):
        w = 2.0 * np.exp(1j * math.pi / 4)
        got = lambda_recurrence(2.5, complex(w))
        want = log_derivative_order(2.5, complex(w))
        assert abs(got - want) < 1e-8

    def test_real_part_is_exponent(self):
        params = ModelParams(4.0, 1.0, math.pi / 3)
        got = lambda_recurrence(4.0, params.bessel_argument).real
        assert got == pytest.approx(lyapunov_exact(params).value, abs=1e-8)

    def test_requires_p_above_two(self):
        with pytest.raises(DomainError):
            lambda_recurrence(1.5, 2.0 + 0.0j)


class TestFromMeasure:
    def test_case_two_inverted_density(self):
        params = ModelParams(1.0, 1.0, math.pi / 6)
        ex = lyapunov_exact(params).value
        inv = InvariantMeasure(params).inverse()
        got = lyapunov_from_measure(inv, case="row_top_random").value
        assert abs(got - ex) < 1e-6

    def test_lloyd_reference(self):
        # nu = C_u (Cauchy at u): lambda = E ln|T| = ln|u|
        u = 2j

        class CauchyHandle:
            def log_modulus_moment(self, cfg=None):
                val, _ = integrate.quad(
                    lambda x: math.log(abs(x)) / (math.pi * u.imag
                                                  * (1 + (x / u.imag) ** 2)),
                    -np.inf, np.inf, limit=400, points=None)
                return val

        got = lyapunov_from_measure(CauchyHandle(),
                                    case="row_top_random").value
        assert got == pytest.approx(lloyd_lyapunov(u + 1 / u), abs=1e-7)

    def test_unknown_case(self):
        with pytest.raises(DomainError):
            lyapunov_from_measure(InvariantMeasure(
                ModelParams(1.0, 1.0, 0.0)), case="nonsense")


class TestLloyd:
    def test_hand_checkable_quadratic(self):
        # u^2 - z u + 1 = 0 at z = 1.5i has roots 2i and -i/2; the outer
        # root gives lambda = ln 2
        assert lloyd_lyapunov(1.5j) == pytest.approx(math.log(2.0),
                                                     rel=1e-14)

    def test_large_imaginary_asymptotics(self):
        z = 3.0 + 400.0j
        assert lloyd_lyapunov(z) == pytest.approx(math.log(abs(z)), rel=1e-4)

    def test_root_pair_product(self):
        # Vieta: u1 u2 = 1, exactly one root outside the unit circle
        z = 1.0 + 2.0j
        disc = (z * z - 4.0) ** 0.5
        u1, u2 = (z + disc) / 2.0, (z - disc) / 2.0
        assert abs(u1 * u2 - 1.0) < 1e-14
        assert (abs(u1) > 1.0) != (abs(u2) > 1.0)
        assert lloyd_lyapunov(z) == pytest.approx(
            math.log(max(abs(u1), abs(u2))), rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            lloyd_lyapunov(1.0 - 1.0j)
        with pytest.raises(DomainError):
            lloyd_lyapunov(1.0 + 0.0j)


class TestLargeS:
    def test_p3_quadratic_remainder(self):
        params = ModelParams(3.0, 1000.0, 0.0)
        _, lv = asympt_large_s(params, 1)
        ex = lyapunov_exact(params).value
        term = 1.0 / ((3.0 - 1.0) ** 2 * params.s ** 2)
        assert abs(ex - lv.value) < 0.2 * term

    def test_p1_log_squared_remainder(self):
        # alpha = pi/2: cos(2 alpha) = -1, leading term -2 (ln s)^2/s^2
        params = ModelParams(1.0, 100.0, math.pi / 2)
        ex = lyapunov_exact(params).value
        base = math.log(params.s) + (-0.5772156649015329)
        rem = ex - base
        want = -2.0 * math.log(params.s) ** 2 / params.s ** 2
        assert rem == pytest.approx(want, rel=0.25)

    def test_small_shape_fractional_power(self):
        # p < 1 remainder scales like ln s / s^{2p} (exact-formula oracle)
        params = ModelParams(0.5, 1000.0, 0.0)
        ex = lyapunov_exact(params).value
        from rmprod.bessel import digamma
        rem = ex - math.log(params.s) - digamma(0.5)
        want = 2.0 * math.gamma(0.5) / math.gamma(1.5) \
            * math.log(params.s) / params.s
        assert rem == pytest.approx(want, rel=0.3)
        assert rem / want > 0

    def test_monotone_approach(self):
        from rmprod.bessel import digamma
        for p in (0.5, 1.0, 3.0):
            gaps = [abs(lyapunov_exact(ModelParams(p, s, 0.0)).value
                        - math.log(s) - digamma(p))
                    for s in (1e2, 1e3, 1e4)]
            assert gaps[0] > gaps[1] > gaps[2]

    def test_order_cap(self):
        with pytest.raises(UnsupportedOrderError):
            asympt_large_s(ModelParams(1.0, 100.0, 0.0), 7)

    def test_large_s_series_is_not_evaluable(self):
        series, _ = asympt_large_s(ModelParams(3.0, 100.0, 0.0), 1)
        with pytest.raises(DomainError):
            series(100.0)


class TestSmallS:
    def test_first_coefficient(self):
        series, _ = asympt_small_s(ModelParams(2.0, 0.1, 0.0), 5)
        assert series.coeffs[1] == pytest.approx(1.0, abs=1e-15)

    def test_axis_odd_terms_vanish(self):
        series, _ = asympt_small_s(ModelParams(1.5, 0.1, math.pi / 2), 5)
        assert series.coeffs[1] == pytest.approx(0.0, abs=1e-16)
        assert series.coeffs[3] == pytest.approx(0.0, abs=1e-16)
        assert series.coeffs[5] == pytest.approx(0.0, abs=1e-16)

    def test_partial_sum_error_budget(self):
        params = ModelParams(1.0, 0.05, math.pi / 4)
        series, lv = asympt_small_s(params, 5)
        ex = lyapunov_exact(params).value
        l5 = abs(series.coeffs[5])
        assert abs(lv.value - ex) <= 10.0 * l5 * params.s ** 5

    def test_generator_matches_table_away_from_it(self):
        # independent check at a shape the lazy assertion does not use
        p = 2.7
        gen = small_s_coefficients(p, 5)
        assert gen[0] == pytest.approx(p / 2.0, rel=1e-13)
        assert gen[1] == pytest.approx(-p / 8.0, rel=1e-13)
        assert gen[2] == pytest.approx(-p * (4 * p * p - 13) / 192.0,
                                       rel=1e-13)
        assert gen[4] == pytest.approx(
            p * (48.0 * p ** 4 - 920.0 * p * p + 1187.0) / 20480.0,
            rel=1e-13)

    def test_empirical_order(self):
        # (lambda(s) - partial_5)/s^6 stays bounded as s -> 0
        params_at = lambda s: ModelParams(1.3, s, math.pi / 5)  # noqa: E731
        ratios = []
        for s in (0.2, 0.1, 0.05, 0.025):
            _, lv = asympt_small_s(params_at(s), 5)
            ex = lyapunov_exact(params_at(s)).value
            ratios.append(abs(ex - lv.value) / s ** 6)
        assert max(ratios) < 10.0 * min(r for r in ratios if r > 0)

    def test_order_cap(self):
        with pytest.raises(UnsupportedOrderError):
            asympt_small_s(ModelParams(1.0, 0.1, 0.0), 6)
        with pytest.raises(UnsupportedOrderError):
            small_s_coefficients(1.0, 65)


class TestMethodAgreement:
    def test_all_routes_coincide(self):
        params = ModelParams(3.0, 1.0, math.pi / 6)
        ex = lyapunov_exact(params).value
        routes = {
            "integer": lyapunov_integer(3, params.s, params.alpha).value,
            "recurrence": lambda_recurrence(
                3.0, params.bessel_argument).real,
            "measure": lyapunov_from_measure(InvariantMeasure(params)).value,
        }
        for name, val in routes.items():
            assert abs(val - ex) < 1e-6, name


class TestPade:
    def test_m_zero_is_partial_sum(self):
        ser = SeriesExpansion("small_s", (1.0, -1.0, 1.0, -1.0, 1.0, -1.0))
        got = pade_resum(ser, 0.5, 3, 0).value
        assert got == pytest.approx(1 - 0.5 + 0.25 - 0.125, rel=1e-15)

    def test_rational_reproduced_exactly(self):
        # 1/(1+s) truncated at order 5, [2/2] at s = 1 -> 1/2
        ser = SeriesExpansion("small_s", (1.0, -1.0, 1.0, -1.0, 1.0, -1.0))
        assert pade_resum(ser, 1.0, 2, 2).value == pytest.approx(0.5,
                                                                 rel=1e-13)

    def test_resummation_beats_truncation(self):
        # the axis series is even in s, so a [4/4] table is the first one
        # deep enough to beat the order-5 truncation at s = 0.8
        params = ModelParams(1.5, 0.8, math.pi / 2)
        ex = lyapunov_exact(params).value
        ser = small_s_series(params, 9)
        pade = pade_resum(ser, params.s, 4, 4).value
        partial = sum(c * params.s ** k
                      for k, c in enumerate(ser.coeffs[:6]))
        assert abs(pade - ex) < abs(partial - ex)

    def test_deep_resummation_of_divergent_series(self):
        params = ModelParams(1.5, 0.8, math.pi / 2)
        ex = lyapunov_exact(params).value
        ser = small_s_series(params, 25)
        got = pade_resum(ser, params.s, 12, 12).value
        assert got == pytest.approx(ex, rel=2e-3)

    def test_pole_error(self):
        # [0/1] of 1 - s has denominator 1 + s: pole at s = -1
        ser = SeriesExpansion("small_s", (1.0, -1.0, 1.0))
        with pytest.raises(PoleError):
            pade_resum(ser, -1.0, 0, 1)

    def test_degenerate_table_falls_back(self):
        # all-even series makes odd tables singular; fallback must engage
        ser = SeriesExpansion("small_s", (0.0, 0.0, 1.0, 0.0, 0.5, 0.0))
        a = pade_resum(ser, 0.3, 2, 2).value
        b = pade_resum(ser, 0.3, 3, 2).value
        assert math.isfinite(a) and math.isfinite(b)

    def test_needs_enough_coefficients(self):
        ser = SeriesExpansion("small_s", (1.0, 1.0))
        with pytest.raises(UnsupportedOrderError):
            pade_resum(ser, 0.1, 2, 2)


class TestAxisSeries:
    def test_first_layer_is_cauchy(self):
        layers = axis_series_layers(1.0, 1)
        assert layers[1] == {1: 1.0}

    def test_alpha_beta_recurrence_start(self):
        al, be = _alpha_beta(3)
        assert al[1] == pytest.approx(math.pi / 2)
        assert al[2] == pytest.approx(math.pi / 4)  # (1 - 1/2) alpha_1
        assert be[1] == 0.0
        # beta_2 = beta_1 - (alpha_1 + beta_1)/2 = -pi/4
        assert be[2] == pytest.approx(-math.pi / 4)

    def test_alpha_beta_against_quadrature(self):
        al, be = _alpha_beta(4)
        for k in (2, 3, 4):
            a_num, _ = integrate.quad(lambda y: (1 + y * y) ** -k, 0, np.inf)
            b_num, _ = integrate.quad(
                lambda y: math.log(y) * (1 + y * y) ** -k, 0, np.inf)
            assert al[k] == pytest.approx(a_num, rel=1e-9)
            assert be[k] == pytest.approx(b_num, rel=1e-9)

    def test_lambda_estimate_within_one_percent(self):
        est = axis_density_series(1.0, 11).lyapunov(0.1).value
        ex = lyapunov_exact(ModelParams(1.0, 0.1, math.pi / 2)).value
        assert est == pytest.approx(ex, rel=1e-2)

    def test_layer_support_structure(self):
        layers = axis_series_layers(2.3, 12)
        for n in range(1, 7):
            assert all(n <= k <= 4 * n - 3 for k in layers[2 * n - 1])
            assert all(n + 1 <= k <= 4 * n - 1 for k in layers[2 * n])

    def test_layers_match_symbolic_differentiation(self):
        # direct route: u_{n+1} = -y^{p+1}/(1+y^2) d/dy [u_n / y^{p-1}]
        sympy = pytest.importorskip("sympy")
        y, p = sympy.symbols("y p", positive=True)
        u = 1 / (1 + y ** 2)
        pval = sympy.Rational(17, 7)
        layers = axis_series_layers(float(pval), 5)
        yv = sympy.Rational(7, 5)
        for n in range(1, 6):
            if n > 1:
                u = sympy.cancel(-y ** (p + 1) / (1 + y ** 2)
                                 * sympy.diff(u / y ** (p - 1), y))
            sigma = 0 if n % 2 == 1 else 1
            direct = u.subs({p: pval, y: yv})
            rec = sum(c * yv ** sigma / (1 + yv ** 2) ** k
                      for k, c in layers[n].items())
            assert abs(float(direct - rec)) < 1e-12

    def test_order_cap(self):
        with pytest.raises(UnsupportedOrderError):
            axis_series_layers(1.0, 13)
