import cmath
import math

import numpy as np
import pytest

from gausszeta import dynamics, spectral, zeta
from gausszeta.errors import DomainError

N0 = ((3.0 + math.sqrt(5.0)) / 2.0) ** 2  # norm of the shortest geodesic


class TestDetRatios:
    def test_xi_matches_orbit_route(self):
        s = 2.0
        det = zeta.xi_det_ratio(s, 64)
        orb = zeta.xi_orbit_exponential(s, n_max=8, max_digit=40)
        assert not det.pole
        assert abs(det.value - orb.value) < 1e-5

    def test_xi_pole_fires_at_one(self):
        res = zeta.xi_det_ratio(1.0, 64)
        assert res.pole
        assert abs(res.denominator) < 1e-13

    def test_xi_truncation_doubling(self):
        a = zeta.xi_det_ratio(2.0, 32).value
        b = zeta.xi_det_ratio(2.0, 64).value
        assert abs(a - b) < 1e-9

    def test_eta_matches_orbit_route(self):
        s = 2.0
        det = zeta.eta_det_ratio(s, 64)
        orb = zeta.eta_orbit_exponential(s)
        assert abs(det.value - orb.value) < 1e-5

    def test_eta_truncation_doubling(self):
        a = zeta.eta_det_ratio(1.5 + 1.0j, 32).value
        b = zeta.eta_det_ratio(1.5 + 1.0j, 64).value
        assert abs(a - b) < 1e-8

    def test_eta_euler_product_oracle(self):
        # digits <= 40 leaves ~1.1e-5 of period-2 mass out of the product
        ee = zeta.eta_euler_product(2.0, 6, 40)
        ed = zeta.eta_det_ratio(2.0, 64)
        assert abs(ee.value - ed.value) < 2e-5

    def test_eta_parity_even_only(self):
        # the orbit route uses even powers only and still hits the det ratio
        orb = zeta.eta_orbit_exponential(1.5)
        det = zeta.eta_det_ratio(1.5, 64)
        assert abs(orb.value - det.value) < 1e-5


class TestSelbergRoutes:
    def test_det_identity_equals_finite_det(self):
        z = zeta.selberg_det_identity(2.0, 64)
        d = spectral.det_finite(2.0, "minus-square", 64)
        assert z.value == d.value

    def test_euler_product_agrees(self):
        z = zeta.selberg_det_identity(2.0, 64).value
        e = zeta.selberg_euler_product(2.0, 10_000.0)
        assert abs(z - e.value) < 1e-4

    def test_euler_leading_factor(self):
        # only the (1,1) class lies below norm 7
        e = zeta.selberg_euler_product(2.0, 7.0, k_max=25)
        assert abs(e.value - (1.0 - N0 ** -2.0)
                   * math.prod(1.0 - N0 ** -(k + 2.0) for k in range(1, 26))) < 1e-12

    def test_empty_product_below_first_norm(self):
        e = zeta.selberg_euler_product(2.0, 6.5)
        assert e.value == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            zeta.selberg_euler_product(0.9, 100.0)

    def test_zero_at_one(self):
        assert abs(zeta.selberg_det_identity(1.0, 64).value) < 1e-6

    def test_real_positive_on_real_axis(self):
        for s in (1.2, 2.0, 3.0):
            v = zeta.selberg_det_identity(s, 48).value
            assert 0.0 < v.real < 1.0 and abs(v.imag) < 1e-14

    def test_conjugate_symmetry(self):
        a = zeta.selberg_det_identity(1.5 + 0.7j, 48).value
        b = zeta.selberg_det_identity(1.5 - 0.7j, 48).value
        assert abs(a.conjugate() - b) < 1e-12


class TestLemma9:
    def test_telescoping(self):
        res = zeta.lemma9_partial(2.0, 6, 48)
        assert abs(res.value - res.aux["telescoped"]) < 1e-12

    def test_large_shift_limit(self):
        res = zeta.lemma9_partial(2.0, 20, 64)
        z = zeta.selberg_det_identity(2.0, 64).value
        assert abs(1.0 / res.value - z) < 1e-6

    def test_single_factor(self):
        res = zeta.lemma9_partial(2.0, 0, 48)
        eta = zeta.eta_det_ratio(2.0, 48)
        assert abs(res.value - eta.value) < 1e-15


class TestLewisZagier:
    def test_matches_determinant(self):
        z = zeta.selberg_det_identity(2.0, 64).value
        red = zeta.lewis_zagier_log_z(2.0, 4, 40)
        assert abs(z - red.value) < 1e-5

    def test_single_class_contribution(self):
        # with one digit and one length the only word is (1,1)
        red = zeta.lewis_zagier_log_z(2.0, 1, 1)
        expect = 0.5 * N0 ** -2.0 / (1.0 - 1.0 / N0)
        assert abs(red.aux["half_log_sum"] - expect) < 1e-15

    def test_reindexing_identity(self):
        # the word sum is the trace sum reorganized; same caps, same digits
        s, l_max, digits = 2.0, 3, 10
        red = zeta.lewis_zagier_log_z(s, l_max, digits, trace_cap=10 ** 9)
        direct = 0.0 + 0.0j
        for l in range(1, l_max + 1):
            rep = spectral.trace_orbit_sum(s, 2 * l, digits, accelerate=False)
            direct += rep.value / (2.0 * l)
        assert abs(red.aux["half_log_sum"] - direct) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            zeta.lewis_zagier_log_z(1.0, 4, 40)


class TestRouteConcordance:
    def test_three_route_theorem(self):
        det = zeta.selberg_det_identity(2.0, 64).value
        eul = zeta.selberg_euler_product(2.0, 10_000.0).value
        red = zeta.lewis_zagier_log_z(2.0, 4, 40).value
        assert abs(det - eul) < 1e-4
        assert abs(det - red) < 1e-5
        assert abs(eul - red) < 1e-4
