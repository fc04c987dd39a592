"""Invariant densities: support, symmetry, unit mass, moments and the
stationarity fixed-point equations.

Independent oracles: scipy.integrate quadratures in raw polar coordinates
(no reuse of the library's substitution-based integrator), closed Bessel
ratios for the moment formulas, and a seeded chain for Dyson's density.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from rmprod.bessel import bessel_k
from rmprod.exceptions import (DegenerateRecurrenceError, DomainError,
                               UnsupportedMomentError)
from rmprod.measure import (ConePoint, InvariantMeasure, ModelParams,
                            axis_integrate, axis_stationary_residual,
                            cone_integrate, density_axis, density_cone,
                            density_dyson, density_gig, gig_integrate,
                            moment, normalization_constant,
                            stationary_residual)


class TestModelParams:
    def test_validation(self):
        with pytest.raises(DomainError):
            ModelParams(0.0, 1.0, 0.0)
        with pytest.raises(DomainError):
            ModelParams(1.0, -1.0, 0.0)
        with pytest.raises(DomainError):
            ModelParams(1.0, 1.0, 2.0)

    def test_cone_membership(self):
        params = ModelParams(1.0, 1.0, math.pi / 6)
        assert ConePoint(1.0, 0.1).in_cone(params)
        assert not ConePoint(1.0, 1.0).in_cone(params)


class TestConeDensity:
    def test_zero_outside_cone(self):
        params = ModelParams(1.0, 1.0, math.pi / 6)
        assert density_cone(params, ConePoint(1.0, math.pi / 4)) == 0.0
        assert density_cone(params, ConePoint(1.0, math.pi / 6)) == 0.0

    def test_conjugation_symmetry(self):
        plus = ModelParams(1.0, 1.0, math.pi / 3)
        minus = ModelParams(1.0, 1.0, -math.pi / 3)
        for r in (0.4, 1.0, 2.5):
            for th in (0.0, 0.3, -0.8):
                assert density_cone(minus, ConePoint(r, -th)) == \
                    pytest.approx(density_cone(plus, ConePoint(r, th)),
                                  rel=1e-14)

    def test_unit_mass_independent_polar_quadrature(self):
        # raw (r, theta) double quadrature, no reuse of cone_integrate
        params = ModelParams(1.0, 1.0, math.pi / 6)
        a = params.alpha

        def f(r, th):
            return density_cone(params, ConePoint(r, th)) * r

        mass, err = integrate.dblquad(f, -a, a, 0.0, 60.0, epsabs=1e-9)
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_unit_mass_substitution_route(self):
        for p, s, a in [(1.0, 1.0, math.pi / 6), (2.5, 0.5, 9 * math.pi / 20),
                        (0.5, 2.0, math.pi / 3)]:
            assert cone_integrate(ModelParams(p, s, a)) == \
                pytest.approx(1.0, abs=1e-6)


class TestAxisDensity:
    def test_sign_mirror(self):
        params = ModelParams(2.0, 1.0, math.pi / 2)
        for y in (0.3, 1.0, -2.2):
            assert density_axis(params, y, "-") == \
                pytest.approx(density_axis(params, -y, "+"), rel=1e-12)

    def test_algebraic_tail(self):
        # y^2 f_+(y) approaches a finite limit
        params = ModelParams(2.0, 1.0, math.pi / 2)
        vals = [y * y * density_axis(params, y) for y in (30.0, 100.0, 300.0)]
        assert vals[2] == pytest.approx(vals[1], rel=2e-2)
        assert vals[2] > 0

    def test_continuity_at_origin(self):
        params = ModelParams(2.0, 0.5, math.pi / 2)
        v0 = density_axis(params, 0.0)
        assert density_axis(params, 1e-7) == pytest.approx(v0, rel=1e-5)
        assert density_axis(params, -1e-7) == pytest.approx(v0, rel=1e-5)

    def test_unit_mass(self):
        assert axis_integrate(1.0, 1.0, lambda y: 1.0) == \
            pytest.approx(1.0, abs=1e-6)
        assert axis_integrate(2.0, 0.5, lambda y: 1.0) == \
            pytest.approx(1.0, abs=1e-6)


class TestGigDensity:
    def test_unit_mass(self):
        got = gig_integrate(1.0, 1.0, lambda x: np.ones_like(x))
        assert got == pytest.approx(1.0, abs=1e-8)

    def test_mean_formula(self):
        # mean of the alpha = 0 law is K_{p-1}(2/s)/K_p(2/s)
        got = gig_integrate(2.0, 1.0, lambda x: x)
        want = (bessel_k(1.0, 2.0) / bessel_k(2.0, 2.0)).real
        assert got == pytest.approx(want, rel=1e-10)

    def test_inversion_symmetry(self):
        # x -> 1/x swaps p -> -p; with K_{-p} = K_p the mass is preserved
        p, s = 1.7, 0.8
        direct = gig_integrate(p, s, lambda x: np.ones_like(x))
        swapped, _ = integrate.quad(
            lambda x: density_gig(p, s, 1.0 / x) / x ** 2, 0.0, np.inf,
            limit=300)
        assert swapped == pytest.approx(direct, rel=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            density_gig(1.0, 1.0, 0.0)


class TestDysonDensity:
    def test_unit_mass_by_construction(self):
        val, _ = integrate.quad(lambda x: density_dyson(1.0, 1.0, 1.0, x),
                                0.0, np.inf, limit=300)
        assert val == pytest.approx(1.0, rel=1e-8)

    def test_p_equal_one_shape(self):
        # p = 1: density proportional to (1+x)^{-1} e^{-x/(s t)}
        p, s, t = 1.0, 1.0, 2.0
        x0, x1 = 0.5, 2.0
        ratio = density_dyson(p, s, t, x0) / density_dyson(p, s, t, x1)
        want = ((1 + x1) / (1 + x0)) * math.exp(-(x0 - x1) / (s * t))
        assert ratio == pytest.approx(want, rel=1e-12)

    def test_monte_carlo_mean(self):
        # chain z <- a t/(1 + z) has the Dyson law as stationary density
        p, s, t = 2.0, 1.0, 0.5
        gen = np.random.default_rng(20240817)
        draws = gen.gamma(p, s, size=1_000_000)
        z = 1.0
        total = 0.0
        burn = 1000
        for i, a in enumerate(draws):
            z = a * t / (1.0 + z)
            if i >= burn:
                total += z
        mc_mean = total / (draws.size - burn)
        want, _ = integrate.quad(
            lambda x: x * density_dyson(p, s, t, x), 0.0, np.inf, limit=300)
        # std error of the autocorrelated average, generous bound
        assert mc_mean == pytest.approx(want, abs=5e-3)


class TestNormalizationConstant:
    def test_alpha_zero_value(self):
        got = normalization_constant(ModelParams(1.0, 1.0, 0.0))
        want = 1.0 / abs(2.0 * bessel_k(1.0, 2.0)) ** 2
        assert got == pytest.approx(want, rel=1e-12)

    def test_axis_limit(self):
        # cone constant 1/|2K_p|^2 converges to 1/(pi^2 [J^2+Y^2])
        near = normalization_constant(ModelParams(1.0, 1.0,
                                                  math.pi / 2 - 1e-4))
        axis = normalization_constant(ModelParams(1.0, 1.0, math.pi / 2))
        assert near == pytest.approx(axis, rel=1e-3)

    def test_reciprocal_of_unnormalized_mass(self):
        # 2-D quadrature of the unnormalized density in raw polar coords
        params = ModelParams(1.0, 1.0, math.pi / 6)
        c = normalization_constant(params)
        a = params.alpha

        def unnorm(r, th):
            return density_cone(params, ConePoint(r, th)) / c * r

        mass, _ = integrate.dblquad(unnorm, -a, a, 0.0, 60.0, epsabs=1e-9)
        assert c == pytest.approx(1.0 / mass, rel=1e-6)


class TestMoments:
    def test_zeroth_is_one(self):
        res = moment(ModelParams(1.0, 1.0, math.pi / 6), 0, 0)
        assert res.value == 1.0 + 0.0j

    def test_mean_formula(self):
        params = ModelParams(1.0, 1.0, math.pi / 6)
        got = moment(params, 1, 0).value
        zb = 2.0 * np.exp(-1j * params.alpha) / params.s
        want = bessel_k(0.0, zb) / bessel_k(1.0, zb)
        assert abs(got - want) < 1e-10

    def test_second_moment_vs_variance_formula(self):
        params = ModelParams(1.0, 1.0, math.pi / 6)
        m10 = moment(params, 1, 0).value
        m11 = moment(params, 1, 1).value
        zb = 2.0 * np.exp(-1j * params.alpha) / params.s
        ratio = bessel_k(0.0, zb) / bessel_k(1.0, zb)
        var = params.s / math.sin(2 * params.alpha) \
            * (np.exp(1j * params.alpha) * ratio).imag
        assert m11.real - abs(m10) ** 2 == pytest.approx(var, abs=1e-10)
        assert abs(m11.imag) < 1e-10

    def test_mean_against_cone_quadrature(self):
        params = ModelParams(2.0, 0.5, math.pi / 3)
        got = moment(params, 1, 0).value
        re = cone_integrate(params, lambda r, th: r * np.cos(th))
        im = cone_integrate(params, lambda r, th: r * np.sin(th))
        assert abs(got - complex(re, im)) < 1e-8

    def test_conjugation_invariant(self):
        params = ModelParams(1.5, 1.0, math.pi / 5)
        m21 = moment(params, 2, 1).value
        re = cone_integrate(params, lambda r, th: r ** 3 * np.cos(th))
        im = cone_integrate(params, lambda r, th: r ** 3 * np.sin(th))
        # M^(1,2) = conj(M^(2,1)) checked against raw quadrature of z |z|^2
        assert abs(m21.conjugate() - complex(re, -im)) < 1e-8

    def test_unsupported(self):
        params = ModelParams(1.0, 1.0, math.pi / 6)
        with pytest.raises(UnsupportedMomentError):
            moment(params, 1, 2)
        with pytest.raises(UnsupportedMomentError):
            moment(params, 5, 4)
        with pytest.raises(DegenerateRecurrenceError):
            moment(ModelParams(1.0, 1.0, 0.0), 1, 0)


class TestStationarity:
    def test_cone_residuals(self):
        assert stationary_residual(ModelParams(1.0, 1.0, math.pi / 6),
                                   ConePoint(1.0, 0.0)) < 1e-8
        assert stationary_residual(ModelParams(3.0, 0.5, math.pi / 3),
                                   ConePoint(2.0, math.pi / 8)) < 1e-8

    def test_boundary_is_trivial(self):
        params = ModelParams(1.0, 1.0, math.pi / 6)
        assert stationary_residual(params,
                                   ConePoint(1.0, math.pi / 6)) == 0.0

    def test_axis_residuals(self):
        assert axis_stationary_residual(ModelParams(1.0, 1.0, math.pi / 2),
                                        1.0) < 1e-6
        assert axis_stationary_residual(ModelParams(2.0, 0.5, math.pi / 2),
                                        -0.7) < 1e-6

    def test_axis_sign_mirror(self):
        params = ModelParams(1.3, 0.8, math.pi / 2)
        a = axis_stationary_residual(params, 0.9, "+")
        b = axis_stationary_residual(params, -0.9, "-")
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12)


class TestWeakLimits:
    def test_alpha_to_zero_monotone(self):
        ref = gig_integrate(1.0, 1.0, lambda x: np.exp(-x))
        devs = [abs(cone_integrate(ModelParams(1.0, 1.0, a),
                                   lambda r, th: np.exp(-r)) - ref)
                for a in (1e-1, 1e-2, 1e-3)]
        assert devs[0] >= 5.0 * devs[1] >= 25.0 * devs[2]

    def test_alpha_to_half_pi(self):
        ref = axis_integrate(1.0, 1.0, lambda y: 1.0 / (1.0 + y * y))
        devs = [abs(cone_integrate(ModelParams(1.0, 1.0, math.pi / 2 - d),
                                   lambda r, th: 1.0 / (1.0 + r * r)) - ref)
                for d in (1e-1, 1e-2, 1e-3)]
        assert devs[0] >= 5.0 * devs[1] >= 25.0 * devs[2]


class TestConcurrency:
    def test_concurrent_density_and_norm_evaluation(self):
        # pure functions plus lock-guarded caches: hammer them from threads
        from concurrent.futures import ThreadPoolExecutor

        params = ModelParams(1.0, 1.0, math.pi / 6)

        def work(k):
            z = ConePoint(0.5 + 0.1 * (k % 7), 0.05 * (k % 5) - 0.1)
            return (density_cone(params, z),
                    normalization_constant(params),
                    density_dyson(2.0, 1.0, 0.5, 1.0 + 0.01 * (k % 3)))

        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(work, range(64)))
        serial = [work(k) for k in range(64)]
        assert results == serial


class TestInvariantMeasureHandle:
    def test_masses(self):
        for params in (ModelParams(1.0, 1.0, math.pi / 6),
                       ModelParams(1.0, 1.0, 0.0),
                       ModelParams(1.0, 1.0, math.pi / 2)):
            m = InvariantMeasure(params)
            assert m.mass() == pytest.approx(1.0, abs=2e-6)
            assert m.inverse().mass() == pytest.approx(1.0, abs=2e-6)

    def test_inversion_flips_log_moment(self):
        params = ModelParams(1.0, 1.0, math.pi / 6)
        direct = InvariantMeasure(params).log_modulus_moment()
        flipped = InvariantMeasure(params).inverse().log_modulus_moment()
        assert flipped == pytest.approx(-direct, abs=1e-8)
