"""The transfer operator of the Gauss map on the disc |z-1| < r.

L_s f(z) = sum_{n>=1} (z+n)^(-2s) f(1/(z+n)), acting on functions holomorphic
on the disc.  Two truncated matrix representations are provided: the Taylor
basis (z-1)^k (alternating binomial sums, assembled in multi-precision
because the cancellation grows with the truncation order) and the
cancellation-free Hurwitz basis zeta(2s+k, z+1).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import DomainError, PoleError

__all__ = [
    "GOLDEN_RATIO",
    "DiscDomain",
    "OperatorMatrix",
    "DirectApplication",
    "image_disc",
    "maps_strictly_inside",
    "holomorphic_grid",
    "apply_direct",
    "matrix_monomial",
    "matrix_hurwitz",
]

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

# Matrix elements are defined for Re(s) > 1/2; through the continued zeta and
# gamma factors they extend below, which critical-line scans rely on.
MIN_MATRIX_SIGMA = 0.3

_MP_LOCK = threading.Lock()
_MONOMIAL_CACHE: dict[tuple[complex, int], np.ndarray] = {}
_CACHE_LOCK = threading.Lock()


@dataclass(frozen=True)
class DiscDomain:
    """The disc |z - 1| < radius; contraction needs radius in [1, golden)."""

    radius: float = 1.5

    def __post_init__(self):
        if not 1.0 <= self.radius < GOLDEN_RATIO:
            raise DomainError(
                f"disc radius must lie in [1, {GOLDEN_RATIO}), got {self.radius}")

    def contains(self, z: complex) -> bool:
        return abs(z - 1.0) < self.radius + 1e-12


def image_disc(n: int, disc: DiscDomain | float) -> tuple[float, float]:
    """Center and radius of psi_n(D_r): the image of the disc under 1/(z+n)."""
    r = disc.radius if isinstance(disc, DiscDomain) else float(disc)
    if n < 1:
        raise DomainError("image_disc requires n >= 1")
    den = (n + 1.0) ** 2 - r * r
    return (n + 1.0) / den, r / den


def maps_strictly_inside(n: int, radius: float) -> bool:
    """Whether psi_n(D_r) lies strictly inside D_r (no radius validation)."""
    den = (n + 1.0) ** 2 - radius * radius
    center, rad = (n + 1.0) / den, radius / den
    return abs(center - 1.0) + rad < radius


def holomorphic_grid(disc: DiscDomain = DiscDomain()) -> np.ndarray:
    """64 equispaced points on |z-1| = r/2 plus z = 1 (fixed test grid)."""
    angles = 2.0 * np.pi * np.arange(64) / 64.0
    circle = 1.0 + (disc.radius / 2.0) * np.exp(1j * angles)
    return np.concatenate([circle, [1.0 + 0.0j]])


@dataclass(frozen=True)
class DirectApplication:
    """Result of applying the operator directly at one point."""

    value: complex
    tail_bound: float        # certified remainder after the Taylor correction
    crude_tail_bound: float  # Weierstrass M-test bound without the correction
    n_cap: int


def _eval_function(f, points: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(f(points), dtype=np.complex128)
        if out.shape == points.shape:
            return out
    except Exception:
        pass
    return np.array([complex(f(p)) for p in points], dtype=np.complex128)


def _taylor_at_zero(f, n_coeffs: int, radius: float = 0.3) -> np.ndarray:
    """Taylor coefficients of f at 0 by the Cauchy integral on |w| = radius."""
    m = 128
    w = radius * np.exp(2j * np.pi * np.arange(m) / m)
    vals = _eval_function(f, w)
    coeffs = np.fft.fft(vals) / m
    return coeffs[:n_coeffs] / radius ** np.arange(n_coeffs)


def apply_direct(s: complex, f, z: complex, n_cap: int = 200,
                 disc: DiscDomain = DiscDomain(),
                 taylor_terms: int = 24) -> DirectApplication:
    """Evaluate (L_s f)(z) as a partial sum plus a zeta-function tail.

    The branch sum over n <= n_cap is exact; the n > n_cap tail is restored
    from the Taylor expansion of f at 0, term j summing to
    c_j * hurwitz_zeta(2s+j, z+n_cap+1).  tail_bound covers what the
    correction cannot see; crude_tail_bound is the plain sup-norm estimate
    (n - r + 1)^(-2 sigma) summed past the cap.
    """
    s = complex(s)
    z = complex(z)
    sigma = s.real
    if sigma <= 0.5:
        raise DomainError(f"apply_direct requires Re(s) > 1/2, got {s}")
    if not disc.contains(z):
        raise DomainError(f"z={z} outside the disc of radius {disc.radius}")
    if n_cap < 1:
        raise DomainError("n_cap must be >= 1")

    ns = np.arange(1, n_cap + 1, dtype=np.float64)
    branches = 1.0 / (z + ns)
    head = complex(np.sum(branches ** (2.0 * s) * _eval_function(f, branches)))

    coeffs = _taylor_at_zero(f, taylor_terms)
    q = z + n_cap + 1.0
    correction = 0.0 + 0.0j
    for j, c in enumerate(coeffs):
        correction += c * specfun.hurwitz_zeta(2.0 * s + j, q)

    grid_vals = np.abs(_eval_function(f, holomorphic_grid(disc)))
    f_norm = float(np.max(grid_vals))
    q_real = n_cap + 1.0 + z.real
    # Dropped Taylor orders decay geometrically; three guard orders plus an
    # FFT noise floor give the working certificate.
    guard = 0.0
    for j in range(taylor_terms, taylor_terms + 3):
        cj = abs(coeffs[-1]) if j >= len(coeffs) else abs(coeffs[j])
        guard += cj * specfun.hurwitz_zeta(2.0 * sigma + taylor_terms, q_real).real
    tail_bound = 3.0 * guard + 1e-15 * f_norm
    crude = f_norm * specfun.hurwitz_zeta(
        2.0 * sigma, n_cap + 2.0 - disc.radius).real
    return DirectApplication(value=head + correction, tail_bound=tail_bound,
                             crude_tail_bound=crude, n_cap=n_cap)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense truncation of the transfer operator in a declared basis."""

    s: complex
    order: int
    basis: str  # "monomial" (Taylor at z=1) or "hurwitz"
    entries: np.ndarray = field(repr=False)
    disc: DiscDomain = DiscDomain()

    def to_json(self) -> dict:
        flat = self.entries.reshape(-1)
        return {
            "s": [self.s.real, self.s.imag],
            "order": self.order,
            "basis": self.basis,
            "entries": [[v.real, v.imag] for v in flat],
        }


def _check_matrix_args(s: complex, m: int) -> complex:
    s = complex(s)
    if s.real <= MIN_MATRIX_SIGMA:
        raise DomainError(
            f"matrix truncation needs Re(s) > {MIN_MATRIX_SIGMA}, got {s}")
    if s == 0.5:
        raise PoleError("zeta(2s) pole at s = 1/2 on the real axis")
    if m < 1:
        raise DomainError("truncation order must be >= 1")
    return s


def _mp_zeta_minus_one(w, mp):
    # For large real part the defining series beats mp.zeta by a wide margin.
    if mp.re(w) >= 40:
        total = mp.mpc(0)
        n = 2
        while True:
            term = mp.power(n, -w)
            total += term
            if abs(term) < mp.mpf(10) ** (-mp.mp.dps - 5):
                return total
            n += 1
    return mp.zeta(w) - 1


def _build_monomial(s: complex, m_order: int) -> np.ndarray:
    import mpmath as mp

    dps = max(40, 18 + int(0.55 * m_order) + 4 * max(0, int(s.real)))
    with _MP_LOCK, mp.workdps(dps):
        s_mp = mp.mpc(s)
        zm1 = [_mp_zeta_minus_one(2 * s_mp + t, mp) for t in range(2 * m_order - 1)]
        out = np.empty((m_order, m_order), dtype=np.complex128)
        # R[j] = Gamma(2s+j+m) / (Gamma(2s+j) m!)  via the m-recurrence.
        ratios = [mp.mpc(1) for _ in range(m_order)]
        for m in range(m_order):
            if m > 0:
                for j in range(m_order):
                    ratios[j] *= (2 * s_mp + j + m - 1) / m
            row = [ratios[j] * zm1[j + m] for j in range(m_order)]
            sign = -1 if m % 2 else 1
            # a[m][k] = (-1)^m * (forward difference)^k of row at 0
            for k in range(m_order):
                out[m, k] = complex(sign * row[0])
                if k < m_order - 1:
                    row = [row[j + 1] - row[j] for j in range(len(row) - 1)]
    return out


def matrix_monomial(s: complex, m_order: int,
                    flip_entry: tuple[int, int] | None = None) -> OperatorMatrix:
    """Truncation in the Taylor basis (z-1)^k.

    a_mk(s) = sum_j C(k,j) (-1)^(m+k-j)/m! * Gamma(2s+j+m)/Gamma(2s+j)
              * (zeta(2s+j+m) - 1).

    The alternating j-sum loses roughly 0.55*M digits at order M, so entries
    are assembled in multi-precision and rounded once to doubles.
    ``flip_entry`` negates one entry (negative-control hook for the
    verification suite).
    """
    s = _check_matrix_args(s, m_order)
    key = (s, m_order)
    with _CACHE_LOCK:
        cached = _MONOMIAL_CACHE.get(key)
    if cached is None:
        cached = _build_monomial(s, m_order)
        with _CACHE_LOCK:
            _MONOMIAL_CACHE[key] = cached
    entries = cached.copy()
    if flip_entry is not None:
        entries[flip_entry] = -entries[flip_entry]
    return OperatorMatrix(s=s, order=m_order, basis="monomial", entries=entries)


def matrix_hurwitz(s: complex, m_order: int) -> OperatorMatrix:
    """Truncation in the basis zeta(2s+k, z+1).

    a_mk(s) = (-1)^m/m! * Gamma(2s+k+m)/Gamma(2s+k) * zeta(2s+k+m); a single
    product per entry, so plain double precision suffices.
    """
    s = _check_matrix_args(s, m_order)
    lg = [specfun.log_gamma(2.0 * s + t) for t in range(2 * m_order - 1)]
    zv = [specfun.riemann_zeta(2.0 * s + t) for t in range(2 * m_order - 1)]
    out = np.empty((m_order, m_order), dtype=np.complex128)
    for m in range(m_order):
        lgfact = math.lgamma(m + 1)
        sign = -1.0 if m % 2 else 1.0
        for k in range(m_order):
            out[m, k] = sign * np.exp(lg[k + m] - lg[k] - lgfact) * zv[k + m]
    return OperatorMatrix(s=s, order=m_order, basis="hurwitz", entries=out)
