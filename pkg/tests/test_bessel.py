"""Bessel machinery against frozen high-precision oracles and identities.

Frozen values were computed by independent doubled-precision (dps = 25)
quadrature of the defining integrals with mpmath, not through any code
under test.
"""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmprod.bessel import (MacdonaldIndex, bessel_jy, bessel_k,
                           bessel_k_dorder, bessel_k_eps_continuation,
                           bessel_k_logscaled, digamma,
                           log_derivative_order, macdonald_integral,
                           macdonald_integral_quadrature, macdonald_terms)
from rmprod.exceptions import (DegenerateRecurrenceError, DomainError)
from rmprod.quadrature import QuadratureConfig

# (1/2) int_0^inf t^{-2} exp(-(t+1/t)) dt at doubled precision
K1_OF_2 = 0.13986588181652242728
# quadrature of the (J, Y) integral representations at x = 2, order 2
J2_OF_2 = 0.35283402861563771915
Y2_OF_2 = -0.61740810419068266648
# d/dx ln Gamma at 1.5 via high-precision differentiation
PSI_1_5 = 0.036489973978576520559
# K_{3/2}(2 e^{i pi/4}) and its order-derivative (mpmath, dps = 25)
K15 = complex(-0.14228286297053174984, -0.2657207312542751393)
DK15 = complex(-0.17048941923302289625, -0.081398237035976302551)
# direct quadrature of the Macdonald integral, n = -2, p = 1, u = conj v
I1_M2 = 0.0089652141791016756379

EULER_GAMMA = 0.5772156649015328606


class TestBesselK:
    def test_half_integer_closed_form(self):
        # K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}
        got = bessel_k(0.5, 1.0)
        assert got.real == pytest.approx(math.sqrt(math.pi / 2) * math.e ** -1,
                                         rel=1e-12)
        assert got.imag == 0.0

    def test_conjugation_symmetry_is_exact(self):
        z = 2.0 * cmath.exp(0.7j)
        a = bessel_k(1.0, z)
        b = bessel_k(1.0, z.conjugate())
        assert a == b.conjugate()

    def test_frozen_quadrature_oracle(self):
        assert bessel_k(1.0, 2.0).real == pytest.approx(K1_OF_2, rel=1e-12)

    def test_against_scipy(self):
        from scipy import special
        for p, z in [(0.0, 1.0), (2.0, 5.0), (3.7, 0.3), (1.0, 2.0)]:
            assert bessel_k(p, z).real == pytest.approx(
                float(special.kv(p, z)), rel=1e-12)

    @given(p=st.floats(0.0, 5.0), radius=st.floats(0.2, 20.0),
           angle=st.floats(-1.4, 1.4))
    @settings(max_examples=25, deadline=None)
    def test_conjugation_property(self, p, radius, angle):
        z = radius * cmath.exp(1j * angle)
        assert bessel_k(p, z) == bessel_k(p, z.conjugate()).conjugate()

    def test_positive_decreasing_on_real_axis(self):
        xs = np.linspace(0.2, 10.0, 25)
        for p in (0.0, 0.5, 1.0, 3.0):
            vals = [bessel_k(p, float(x)).real for x in xs]
            assert all(v > 0 for v in vals)
            assert all(a > b for a, b in zip(vals, vals[1:]))

    @given(p=st.floats(1.0, 6.0), radius=st.floats(0.5, 10.0),
           angle=st.floats(-1.3, 1.3))
    @settings(max_examples=25, deadline=None)
    def test_three_term_recurrence(self, p, radius, angle):
        # K_{p+1}(z) = (2p/z) K_p(z) + K_{p-1}(z)
        z = radius * cmath.exp(1j * angle)
        km, k0, kp = (bessel_k(p - 1.0, z), bessel_k(p, z),
                      bessel_k(p + 1.0, z))
        resid = abs(kp - (2 * p / z) * k0 - km)
        assert resid <= 1e-9 * abs(kp)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bessel_k(1.0, -1.0 + 0.5j)
        with pytest.raises(DomainError):
            bessel_k(1.0, 0.0)
        with pytest.raises(DomainError):
            bessel_k(70.0, 1.0)
        with pytest.raises(DomainError):
            bessel_k(1.0, 1e-8)

    def test_logscaled_handles_large_argument(self):
        y, ell = bessel_k_logscaled(1.0, 700.0)
        # K_1(700) underflows as a plain double; the pair must not
        assert math.isfinite(y.real) and math.isfinite(ell)
        assert ell < -690.0

    def test_axis_matches_eps_continuation(self):
        # independent route: rotate off the axis and extrapolate eps -> 0
        for p, x in [(1.0, 2.0), (2.5, 4.0), (0.5, 1.0)]:
            direct = bessel_k(p, complex(0.0, x))
            extrap = bessel_k_eps_continuation(p, x)
            assert abs(direct - extrap) <= 1e-6 * abs(direct)


class TestBesselJY:
    def test_half_integer_zero(self):
        J, _ = bessel_jy(0.5, math.pi)
        assert abs(J) < 1e-12  # J_{1/2}(x) = sqrt(2/(pi x)) sin x

    def test_frozen_quadrature_oracle(self):
        J, Y = bessel_jy(2.0, 2.0)
        assert J == pytest.approx(J2_OF_2, rel=1e-12)
        assert Y == pytest.approx(Y2_OF_2, rel=1e-12)

    def test_modulus_identity_with_axis_k(self):
        # |K_n(ix)| = (pi/2) |J_n(x) + i Y_n(x)| ties the two families
        for n, x in [(1, 2.0), (0, 1.0), (3, 4.0)]:
            J, Y = bessel_jy(float(n), x)
            lhs = abs(bessel_k(float(n), complex(0.0, x)))
            assert lhs == pytest.approx(0.5 * math.pi * math.hypot(J, Y),
                                        rel=1e-11)

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_jy(1.0, 0.0)
        with pytest.raises(DomainError):
            bessel_jy(1.0, -2.0)


class TestOrderDerivative:
    def test_even_in_order_at_zero(self):
        assert bessel_k_dorder(0.0, 2.0) == 0.0

    def test_integer_single_term(self):
        # n = 1 closed form collapses to K_0(z)/z
        got = bessel_k_dorder(1.0, 2.0)
        want = bessel_k(0.0, 2.0) / 2.0
        assert got.real == pytest.approx(want.real, rel=1e-11)

    def test_frozen_noninteger_value(self):
        z = 2.0 * cmath.exp(1j * math.pi / 4)
        assert abs(bessel_k(1.5, z) - K15) < 1e-11
        assert abs(bessel_k_dorder(1.5, z) - DK15) < 1e-10

    def test_richardson_stencil_oracle(self):
        # 5-point central differences of bessel_k with Richardson in h
        z = 2.0 * cmath.exp(1j * math.pi / 4)
        p = 1.5

        def stencil(h):
            v = [bessel_k(p + m * h, z) for m in (-2, -1, 1, 2)]
            return (v[0] - 8 * v[1] + 8 * v[2] - v[3]) / (12 * h)

        d1, d2 = stencil(2e-4), stencil(1e-4)
        fd = d2 + (d2 - d1) / 15.0
        assert abs(bessel_k_dorder(p, z) - fd) < 1e-9

    def test_integer_vs_noninteger_continuity(self):
        for n in (1, 2, 3):
            z = 2.5 + 0.0j
            at_n = bessel_k_dorder(float(n), z)
            for eps in (1e-6, -1e-6):
                near = bessel_k_dorder(n + eps, z)
                assert abs(near - at_n) <= 1e-4 * abs(at_n)

    def test_axis_order_derivative(self):
        # ratio form at the axis equals the exact exponent source
        lam = log_derivative_order(2.0, 4.0j)
        alt = bessel_k_dorder(2.0, 4.0j) / bessel_k(2.0, 4.0j)
        assert abs(lam - alt) < 1e-10


class TestDigamma:
    def test_euler_mascheroni(self):
        assert digamma(1.0) == pytest.approx(-EULER_GAMMA, abs=1e-14)

    def test_recurrence(self):
        assert digamma(2.0) == pytest.approx(digamma(1.0) + 1.0, abs=1e-14)

    def test_frozen_lgamma_oracle(self):
        assert digamma(1.5) == pytest.approx(PSI_1_5, abs=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            digamma(0.0)


class TestMacdonald:
    def test_factorization_at_minus_one(self):
        p, u, v = 1.0, 2.0 + 0.0j, 2.0 + 0.0j
        got = macdonald_integral(MacdonaldIndex(p, -1, u, v))
        want = bessel_k(p, u) * bessel_k(p, v)
        assert abs(got - want) < 1e-12 * abs(want)

    def test_cross_product_identity(self):
        p, u, v = 1.0, 2.0 + 0.0j, 3.0 + 0.0j
        got = macdonald_integral(MacdonaldIndex(p, 0, u, v))
        want = (u * bessel_k(2.0, u) * bessel_k(1.0, v)
                + v * bessel_k(2.0, v) * bessel_k(1.0, u)
                - 2.0 * bessel_k(1.0, u) * bessel_k(1.0, v))
        assert abs(got - want) < 1e-12 * abs(want)

    def test_frozen_direct_quadrature(self):
        u = 2.0 * cmath.exp(1j * math.pi / 6)
        idx = MacdonaldIndex(1.0, -2, u, u.conjugate())
        got = macdonald_integral(idx)
        assert abs(got - I1_M2) < 1e-11
        quad = macdonald_integral_quadrature(idx)
        assert abs(quad - got) < 1e-10

    @given(p=st.floats(0.3, 3.0), r1=st.floats(0.8, 2.5),
           a1=st.floats(-0.6, 0.6), r2=st.floats(0.8, 2.5),
           a2=st.floats(-0.6, 0.6))
    @settings(max_examples=10, deadline=None)
    def test_random_factorization(self, p, r1, a1, r2, a2):
        u = r1 * cmath.exp(1j * a1)
        v = r2 * cmath.exp(1j * a2)
        got = macdonald_integral_quadrature(MacdonaldIndex(p, -1, u, v))
        want = bessel_k(p, u) * bessel_k(p, v)
        assert abs(got - want) <= 1e-8 * abs(want)

    def test_forward_backward_consistency(self):
        p, u, v = 1.3, 2.0 + 0.3j, 1.5 - 0.2j
        for n in (-3, -2, 1, 2):
            got = macdonald_integral(MacdonaldIndex(p, n, u, v))
            quad = macdonald_integral_quadrature(MacdonaldIndex(p, n, u, v))
            assert abs(got - quad) <= 1e-9 * max(1.0, abs(got))

    def test_degenerate_backward(self):
        with pytest.raises(DegenerateRecurrenceError):
            MacdonaldIndex(1.0, -2, 2.0 + 0.0j, 2.0 + 0.0j)

    def test_admissibility(self):
        # arg(u + v) = 1.2 > pi/4
        with pytest.raises(DomainError):
            MacdonaldIndex(1.0, 0, cmath.exp(1.2j), cmath.exp(1.2j))

    def test_term_reduction_structure(self):
        # n = -1 is the bare product; one forward step adds derivatives
        assert macdonald_terms(1.0, -1) == {(0, 0, 0, 0, 0): 1.0}
        t0 = macdonald_terms(1.0, 0)
        assert all(m == 0 for (_, _, _, _, m) in t0)


class TestQuadratureConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            QuadratureConfig(abs_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureConfig(max_refinements=0)

    def test_tolerance_is_respected(self):
        loose = QuadratureConfig(abs_tol=1e-6, rel_tol=1e-6,
                                 max_refinements=12)
        tight = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-13,
                                 max_refinements=14)
        a = bessel_k(1.0, 2.0, loose).real
        b = bessel_k(1.0, 2.0, tight).real
        assert a == pytest.approx(K1_OF_2, rel=1e-6)
        assert b == pytest.approx(K1_OF_2, rel=1e-13)
