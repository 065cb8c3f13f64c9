import cmath
import math

import numpy as np
import pytest

from gausszeta import dynamics, spectral
from gausszeta.errors import DomainError, NonConvergenceError

GOLDEN_POINT = (math.sqrt(5.0) - 1.0) / 2.0


class TestClosedFormTrace:
    def test_leading_term(self):
        # the n = 1 term alone is the golden-point expression
        for s in (1.0, 1.7):
            lead = GOLDEN_POINT ** (2 * s) / (1.0 + GOLDEN_POINT ** 2)
            single = spectral.word_power_sum(s, 1, 1, accelerate=False)[0]
            assert single.real == pytest.approx(lead, abs=1e-14)
            rep = spectral.trace_closed_form(s, 50_000)
            assert rep.value.real > lead

    def test_matches_matrix_trace(self):
        for s in (1.0, 2.0, 1 + 2j):
            closed = spectral.trace_closed_form(s, 100_000)
            mat = spectral.trace_matrix(s, 64, 1)
            assert abs(closed.value - mat.value) < 1e-10
            assert closed.tail_bound < 1e-12

    def test_domain_gate(self):
        with pytest.raises(DomainError):
            spectral.trace_closed_form(0.5)

    def test_json(self):
        rep = spectral.trace_closed_form(1.5, 5_000)
        blob = rep.to_json()
        assert blob["method"] == "closed-form"
        assert blob["s"] == [1.5, 0.0]


class TestOrbitSum:
    def test_n1_reproduces_closed_form(self):
        # definitional coincidence at n = 1, term by term
        s, cap = 1.25, 4_000
        raw = spectral.trace_orbit_sum(s, 1, cap, accelerate=False)
        ns = np.arange(1, cap + 1, dtype=np.float64)
        x = 2.0 / (ns + np.sqrt(ns * ns + 4.0))
        direct = complex(np.sum(x ** (2 * s) / (1.0 + x * x)))
        assert abs(raw.value - direct) < 1e-14

    def test_n2_against_matrix_square(self):
        rep = spectral.trace_orbit_sum(1.0, 2, 200)
        mat = spectral.trace_matrix(1.0, 64, 2)
        assert abs(rep.value - mat.value) < 1e-8

    def test_sign_structure(self):
        # odd powers carry 1 + pi^2 in the denominator, even powers 1 - pi^2
        pi1 = GOLDEN_POINT            # word (1)
        pi2 = GOLDEN_POINT ** 2       # word (1,1)
        odd = spectral.word_power_sum(3.0, 1, 1, accelerate=False)[0]
        assert odd == pytest.approx(pi1 ** 6 / (1.0 + pi1 ** 2), abs=1e-12)
        even = spectral.word_power_sum(3.0, 2, 1, accelerate=False)[0]
        assert even == pytest.approx(pi2 ** 6 / (1.0 - pi2 ** 2), abs=1e-12)

    def test_certified_tail_small(self):
        rep = spectral.trace_orbit_sum(1.0, 3, 64)
        assert rep.tail_bound < 1e-9


class TestKernelTrace:
    def test_per_term_closed_form(self):
        x1 = GOLDEN_POINT
        q = spectral.trace_kernel_term(1.0, 1)
        assert abs(q - x1 ** 2 / (1.0 + x1 ** 2)) < 1e-12

    def test_against_closed_form(self):
        for s in (1.5, 1 + 2j):
            kern = spectral.trace_kernel_integral(s, 30)
            closed = spectral.trace_closed_form(s, 100_000)
            assert abs(kern.value - closed.value) < 1e-9

    def test_empty_sum(self):
        rep = spectral.trace_kernel_integral(1.0, 0)
        assert rep.value != 0.0  # closed-form bridge keeps the value whole
        full = spectral.trace_closed_form(1.0, 100_000)
        assert abs(rep.value - full.value) < 1e-10


class TestDeterminants:
    def test_one_by_one(self):
        rep = spectral.det_finite(2.0, "minus", 1)
        expect = 1.0 - (math.pi ** 4 / 90.0 - 1.0)
        assert abs(rep.value - expect) < 1e-13

    def test_factorization(self):
        dm = spectral.det_finite(2.0, "minus", 48).value
        dp = spectral.det_finite(2.0, "plus", 48).value
        dsq = spectral.det_finite(2.0, "minus-square", 48).value
        assert abs(dm * dp - dsq) < 1e-12

    def test_truncation_doubling(self):
        a = spectral.det_finite(2.0, "minus", 32).value
        b = spectral.det_finite(2.0, "minus", 64).value
        assert abs(a - b) < 1e-10

    def test_series_route(self):
        ser = spectral.fredholm_det_series(2.0, 1, n_max=8, max_digit=40)
        fin = spectral.det_finite(2.0, "minus", 64).value
        assert abs(ser.value - fin) < 1e-8

    def test_series_sign_identity(self):
        plus = spectral.fredholm_det_series(2.0, -1)
        fin = spectral.det_finite(2.0, "plus", 64).value
        assert abs(plus.value - fin) < 1e-8

    def test_unit_eigenvalue_collapses_det(self):
        assert abs(spectral.det_finite(1.0, "minus", 64).value) < 1e-12
        # the harmonic trace series can only creep toward that zero
        small = spectral.fredholm_det_series(1.0, 1, n_max=4).value
        smaller = spectral.fredholm_det_series(1.0, 1, n_max=8).value
        assert abs(smaller) < abs(small)

    def test_bad_sign(self):
        with pytest.raises(DomainError):
            spectral.fredholm_det_series(2.0, 3)


class TestSpectrum:
    def test_perron_eigenvalue(self):
        eig = spectral.spectrum(1.0, 64, 5)
        assert abs(eig[0] - 1.0) < 1e-10

    def test_gkw_constant(self):
        # computed anchor, stable to 8 digits between truncations
        lam48 = spectral.spectrum(1.0, 48, 2)[1]
        lam64 = spectral.spectrum(1.0, 64, 2)[1]
        assert abs(lam48 - lam64) < 1e-8
        assert lam64.real == pytest.approx(-0.3036630028987327, abs=1e-10)

    def test_contraction_above_one(self):
        eig = spectral.spectrum(2.0, 48, 10)
        assert np.all(np.abs(eig) < 1.0)

    def test_ordering(self):
        eig = spectral.spectrum(1.0, 48, 8)
        mags = np.abs(eig)
        assert np.all(mags[:-1] >= mags[1:] - 1e-15)


class TestFindZero:
    def test_perron_zero(self):
        res = spectral.find_zero(1.05, "minus", 64, tol=1e-12)
        assert abs(res.root - 1.0) < 1e-8
        assert res.det_at_root < 1e-10

    def test_domain_gate(self):
        with pytest.raises(DomainError):
            spectral.find_zero(0.4, "minus", 32)

    def test_secant_needs_slope(self):
        with pytest.raises((NonConvergenceError, DomainError)):
            spectral.find_zero(40.0, "minus", 8, tol=1e-15, max_iter=4)


class TestCappedEnumeration:
    def test_matches_box_when_uncapped(self):
        t = spectral.capped_trace_array(2, 5, 10 ** 6)
        box = spectral._box_traces_impl(2, 5)
        assert sorted(t.tolist()) == sorted(box.tolist())

    def test_trace_cap_prunes(self):
        t = spectral.capped_trace_array(4, 10, 50)
        assert t.max() <= 50
        assert (t >= 3).all()
