"""Truncated multivariate Taylor series with batched complex coefficients.

Supports the handful of operations the orbit-sum tail machinery needs:
ring arithmetic, reciprocals, complex powers and monomial shifts, on series
in 1-3 variables truncated at a common order K per variable.  Coefficients
are numpy arrays of shape (K,)*nvars + batch_shape, so one series object
tracks a whole batch of expansions at once.
"""

from __future__ import annotations

import math
from itertools import product as _iproduct

import numpy as np

__all__ = ["TSeries"]


class TSeries:
    __slots__ = ("coef", "nvars", "order")

    def __init__(self, coef: np.ndarray, nvars: int):
        self.coef = coef
        self.nvars = nvars
        self.order = coef.shape[0] if nvars else 1

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, nvars: int, order: int, batch_shape: tuple[int, ...] = ()):
        return cls(np.zeros((order,) * nvars + batch_shape, dtype=np.complex128), nvars)

    @classmethod
    def const(cls, value, nvars: int, order: int, batch_shape: tuple[int, ...] = ()):
        s = cls.zeros(nvars, order, batch_shape)
        s.coef[(0,) * nvars] = value
        return s

    def copy(self) -> "TSeries":
        return TSeries(self.coef.copy(), self.nvars)

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.coef.shape[self.nvars:]

    def _const_term(self) -> np.ndarray:
        return self.coef[(0,) * self.nvars]

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TSeries):
            return TSeries(self.coef + other.coef, self.nvars)
        out = self.copy()
        out.coef[(0,) * self.nvars] += other
        return out

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TSeries):
            return TSeries(self.coef - other.coef, self.nvars)
        out = self.copy()
        out.coef[(0,) * self.nvars] -= other
        return out

    def __rsub__(self, other):
        out = TSeries(-self.coef, self.nvars)
        out.coef[(0,) * self.nvars] += other
        return out

    def __neg__(self):
        return TSeries(-self.coef, self.nvars)

    def __mul__(self, other):
        if not isinstance(other, TSeries):
            return TSeries(self.coef * other, self.nvars)
        K, nv = self.order, self.nvars
        a, b = self.coef, other.coef
        if a.size > b.size:
            a, b = b, a
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape),
                       dtype=np.complex128)
        # Truncated convolution, skipping all-zero slices of the 'a' side.
        batch_axes = tuple(range(nv, a.ndim))
        mask = np.abs(a).max(axis=batch_axes) if batch_axes else np.abs(a)
        for idx in _iproduct(*(range(K),) * nv):
            if not mask[idx]:
                continue
            dst = tuple(slice(i, K) for i in idx)
            src = tuple(slice(0, K - i) for i in idx)
            out[dst] += a[idx] * b[src]
        return TSeries(out, nv)

    __rmul__ = __mul__

    def reciprocal(self) -> "TSeries":
        """1/f for a series with invertible constant term (Neumann series)."""
        c0 = np.asarray(self._const_term()).copy()
        g = self * (1.0 / c0)
        g.coef[(0,) * self.nvars] = 0.0  # g = f/c0 - 1
        # 1/f = (1/c0) * sum (-g)^i
        acc = TSeries.const(1.0, self.nvars, self.order, self.batch_shape)
        power = None
        for _ in range(1, self.order):
            power = -g if power is None else power * (-g)
            acc = acc + power
        return acc * (1.0 / c0)

    def log(self) -> "TSeries":
        c0 = np.asarray(self._const_term()).copy()
        g = self * (1.0 / c0)
        g.coef[(0,) * self.nvars] = 0.0
        acc = TSeries.const(np.log(c0.astype(np.complex128)), self.nvars,
                            self.order, self.batch_shape)
        power = None
        for i in range(1, self.order):
            power = g if power is None else power * g
            acc = acc + power * ((-1.0) ** (i + 1) / i)
        return acc

    def exp_zero_const(self) -> "TSeries":
        """exp(f) for a series with zero constant term."""
        acc = TSeries.const(1.0, self.nvars, self.order, self.batch_shape)
        power = None
        for i in range(1, self.order):
            power = self if power is None else power * self
            acc = acc + power * (1.0 / math.factorial(i))
        return acc

    def cpow(self, alpha: complex) -> "TSeries":
        """f**alpha (principal branch on the constant term).

        The J.C.P. Miller recurrence, applied along the first variable with
        block coefficients that are series in the remaining variables; a
        single convolution-sized pass at every level.
        """
        K = self.order
        f = self.coef
        if self.nvars == 1:
            f0 = f[0]
            out = np.empty_like(f)
            out[0] = np.exp(alpha * np.log(f0.astype(np.complex128)))
            for k in range(1, K):
                acc = 0.0
                for i in range(1, k + 1):
                    acc = acc + (i * (alpha + 1.0) - k) * f[i] * out[k - i]
                out[k] = acc / (k * f0)
            return TSeries(out, 1)
        sub = self.nvars - 1
        blocks = [TSeries(f[i], sub) for i in range(K)]
        f0_inv = blocks[0].cpow(-1.0)
        out = [blocks[0].cpow(alpha)]
        for k in range(1, K):
            acc = blocks[1] * out[k - 1] * (alpha + 1.0 - k)
            for i in range(2, k + 1):
                acc = acc + blocks[i] * out[k - i] * (i * (alpha + 1.0) - k)
            out.append(acc * f0_inv * (1.0 / k))
        return TSeries(np.stack([o.coef for o in out]), self.nvars)

    def reciprocal_fast(self) -> "TSeries":
        return self.cpow(-1.0)

    def shift(self, offsets: tuple[int, ...]) -> "TSeries":
        """Multiply by the monomial prod_p u_p^offsets[p] (truncating)."""
        out = TSeries.zeros(self.nvars, self.order, self.batch_shape)
        dst = tuple(slice(o, self.order) for o in offsets)
        src = tuple(slice(0, self.order - o) for o in offsets)
        out.coef[dst] = self.coef[src]
        return out

    def evaluate(self, us: tuple[complex, ...]) -> np.ndarray:
        """Evaluate at a point (one value per variable), Horner per axis."""
        c = self.coef
        for u in us:  # axis 0 always holds the next variable's exponents
            acc = c[-1]
            for k in range(c.shape[0] - 2, -1, -1):
                acc = acc * u + c[k]
            c = acc
        return c
