import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gausszeta import specfun
from gausszeta.errors import DomainError, PoleError


def brute_zeta(s: complex, terms: int = 1_000_000) -> complex:
    """Independent oracle: partial sum of n^-s plus an integral tail bound.

    For Re(s) > 1 the dropped tail lies below N^(1-sigma)/(sigma-1), which
    the caller accounts for in its tolerance.
    """
    n = np.arange(1, terms + 1, dtype=np.float64)
    partial = complex(np.sum(n ** (-s)))
    # Euler-Maclaurin first corrections make the oracle sharp
    big = float(terms)
    partial += big ** (1 - s) / (s - 1) - 0.5 * big ** (-s) \
        + s / 12.0 * big ** (-s - 1)
    return partial


def brute_hurwitz(w: complex, q: complex, terms: int = 1_000_000) -> complex:
    n = np.arange(terms, dtype=np.float64)
    partial = complex(np.sum((q + n) ** (-w)))
    big = q + terms
    partial += big ** (1 - w) / (w - 1) + 0.5 * big ** (-w) \
        - w / 12.0 * big ** (-w - 1)
    # the 1/2 and B_2 signs match summing from n = terms upward
    return partial


def bessel_series_highprec(nu: complex, u: complex, dps: int = 40) -> complex:
    """Term-by-term series summation at elevated working precision."""
    import mpmath as mp

    with mp.workdps(dps):
        nu_m, u_m = mp.mpc(nu), mp.mpc(u)
        term = mp.exp(nu_m * mp.log(u_m / 2) - mp.loggamma(nu_m + 1))
        total = term
        for k in range(1, 2000):
            term *= -(u_m / 2) ** 2 / (k * (k + nu_m))
            total += term
            if abs(term) < mp.mpf("1e-45") * abs(total):
                break
        return complex(total)


class TestLogGamma:
    def test_gamma_one(self):
        assert abs(specfun.log_gamma(1.0)) < 1e-14

    def test_gamma_half(self):
        assert specfun.log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)

    def test_gamma_four(self):
        assert specfun.log_gamma(4.0) == pytest.approx(math.log(6.0), abs=1e-13)

    def test_poles(self):
        for z in (0.0, -1.0, -2.0, -17.0):
            with pytest.raises(PoleError):
                specfun.log_gamma(z)

    def test_recurrence_grid(self):
        rng = random.Random(7)
        for _ in range(100):
            z = complex(rng.uniform(0.2, 10.0), rng.uniform(-20.0, 20.0))
            g1 = cmath.exp(specfun.log_gamma(z + 1.0))
            g0 = cmath.exp(specfun.log_gamma(z))
            assert abs(g1 - z * g0) / abs(g1) < 1e-12


class TestRiemannZeta:
    def test_basel(self):
        assert specfun.riemann_zeta(2.0) == pytest.approx(math.pi ** 2 / 6, abs=1e-14)

    def test_fourth(self):
        assert specfun.riemann_zeta(4.0) == pytest.approx(math.pi ** 4 / 90, abs=1e-14)

    def test_pole(self):
        with pytest.raises(PoleError):
            specfun.riemann_zeta(1.0)

    def test_complex_point_against_brute_sum(self):
        s = 2.0 + 3.0j
        assert abs(specfun.riemann_zeta(s) - brute_zeta(s)) < 1e-11

    def test_accuracy_band(self):
        # contract: absolute error <= 1e-13 for Re >= 1.1, |Im| <= 100
        import mpmath as mp

        with mp.workdps(30):
            for s in (1.1 + 100.0j, 1.5 - 40.0j, 3.0 + 77.0j):
                ref = complex(mp.zeta(mp.mpc(s.real, s.imag)))
                assert abs(specfun.riemann_zeta(s) - ref) < 1e-13


class TestHurwitzZeta:
    def test_reduces_to_riemann(self):
        assert specfun.hurwitz_zeta(2.0, 1.0) == pytest.approx(math.pi ** 2 / 6, abs=1e-13)

    def test_index_shift(self):
        assert specfun.hurwitz_zeta(2.0, 2.0) == pytest.approx(math.pi ** 2 / 6 - 1.0, abs=1e-13)

    def test_complex_against_brute_sum(self):
        w, q = 3.0 + 1.0j, 1.5
        assert abs(specfun.hurwitz_zeta(w, q) - brute_hurwitz(w, q)) < 1e-12

    def test_pole_and_domain(self):
        with pytest.raises(PoleError):
            specfun.hurwitz_zeta(1.0, 2.0)
        with pytest.raises(DomainError):
            specfun.hurwitz_zeta(2.0, -0.5)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(1.2, 8.0), st.floats(-4.0, 4.0),
           st.floats(0.3, 5.0), st.floats(-2.0, 2.0))
    def test_shift_identity(self, wr, wi, qr, qi):
        w, q = complex(wr, wi), complex(qr, qi)
        lhs = specfun.hurwitz_zeta(w, q) - specfun.hurwitz_zeta(w, q + 1.0)
        scale = max(1.0, abs(q ** (-w)))
        assert abs(lhs - q ** (-w)) < 1e-12 * scale


class TestBesselJ:
    def test_at_zero(self):
        assert specfun.bessel_j(0.0, 0.0) == 1.0
        assert specfun.bessel_j(1.0, 0.0) == 0.0

    def test_order_three(self):
        ref = bessel_series_highprec(3.0, 2.0)
        assert abs(specfun.bessel_j(3.0, 2.0) - ref) < 1e-14

    def test_integer_orders_real_axis(self):
        for n in (0, 1, 2):
            for u in np.linspace(0.25, 10.0, 14):
                ref = bessel_series_highprec(float(n), float(u))
                assert abs(specfun.bessel_j(n, float(u)) - ref) < 1e-12

    def test_large_argument_escalates(self):
        # |u| = 50 loses ~12 digits in doubles; escalation must recover
        ref = bessel_series_highprec(1.0 + 4.0j, 50.0, dps=60)
        val = specfun.bessel_j(1.0 + 4.0j, 50.0)
        assert abs(val - ref) / abs(ref) < 1e-12

    def test_negative_axis_branch_guard(self):
        with pytest.raises(DomainError):
            specfun.bessel_j(0.5, -2.0)
