import numpy as np
import pytest

from gausszeta.series import TSeries


def make(coeffs: dict, nvars: int, order: int = 8, batch=(1,)) -> TSeries:
    s = TSeries.zeros(nvars, order, batch)
    for exps, val in coeffs.items():
        s.coef[exps] = val
    return s


class TestRing:
    def test_multiplication_truncates(self):
        a = make({(0, 0): 1.0, (1, 0): 1.0}, 2)
        b = make({(0, 0): 1.0, (0, 1): 2.0}, 2)
        c = a * b
        assert c.coef[0, 0, 0] == 1.0
        assert c.coef[1, 0, 0] == 1.0
        assert c.coef[0, 1, 0] == 2.0
        assert c.coef[1, 1, 0] == 2.0

    def test_scalar_ops(self):
        a = make({(0,): 2.0, (1,): 3.0}, 1)
        b = (1.0 - a) * 2.0
        assert b.coef[0, 0] == -2.0
        assert b.coef[1, 0] == -6.0


class TestPowers:
    @pytest.mark.parametrize("alpha", [-1.0, 0.5, -2.0, 1.5 + 0.5j])
    def test_cpow_one_var(self, alpha):
        f = make({(0,): 1.0, (1,): 0.3, (2,): -0.1}, 1, order=12)
        p = f.cpow(alpha)
        u = 0.07
        fval = 1.0 + 0.3 * u - 0.1 * u * u
        assert p.evaluate((u,))[0] == pytest.approx(fval ** alpha, abs=1e-13)

    @pytest.mark.parametrize("alpha", [-1.0, 0.5, -3.0 - 1.0j])
    def test_cpow_two_vars(self, alpha):
        f = make({(0, 0): 1.0, (1, 0): 2.0, (0, 1): 1.0, (1, 1): 0.5}, 2, order=10)
        p = f.cpow(alpha)
        u, v = 0.02, 0.015
        fval = 1.0 + 2.0 * u + v + 0.5 * u * v
        assert p.evaluate((u, v))[0] == pytest.approx(fval ** alpha, abs=1e-12)

    def test_cpow_three_vars(self):
        f = make({(0, 0, 0): 2.0, (1, 0, 0): 1.0, (0, 1, 0): 1.0,
                  (0, 0, 1): 1.0}, 3, order=8)
        p = f.cpow(-2.0)
        pt = (0.02, 0.01, 0.01)
        fval = 2.0 + sum(pt)
        assert p.evaluate(pt)[0] == pytest.approx(fval ** -2.0, abs=1e-10)

    def test_reciprocal_matches_cpow(self):
        f = make({(0,): 1.5, (1,): -0.4}, 1)
        a = f.reciprocal().evaluate((0.1,))[0]
        b = f.cpow(-1.0).evaluate((0.1,))[0]
        assert a == pytest.approx(b, abs=1e-14)


class TestShift:
    def test_monomial_shift(self):
        f = make({(0,): 1.0, (1,): 4.0}, 1)
        g = f.shift((2,))
        assert g.coef[2, 0] == 1.0
        assert g.coef[3, 0] == 4.0
        assert g.coef[0, 0] == 0.0

    def test_batch_broadcast(self):
        s = TSeries.zeros(1, 6, (3,))
        s.coef[0] = np.array([1.0, 2.0, 4.0])
        s.coef[1] = 1.0
        inv = s.cpow(-1.0)
        assert inv.coef[0] == pytest.approx([1.0, 0.5, 0.25])
