"""Complex-argument special functions: log-gamma, Riemann/Hurwitz zeta, Bessel J.

Everything here is double precision.  ``log_gamma`` uses a fixed-coefficient
Lanczos approximation, the two zeta functions use Euler-Maclaurin summation,
and ``bessel_j`` sums its defining power series, escalating to multi-precision
arithmetic (mpmath as the big-float backend, same series) when the alternating
sum would lose too many digits in doubles.
"""

from __future__ import annotations

import cmath
import math
import threading
from fractions import Fraction

import numpy as np

from .errors import DomainError, NonConvergenceError, PoleError

__all__ = ["log_gamma", "riemann_zeta", "hurwitz_zeta", "bessel_j"]

_MP_LOCK = threading.Lock()  # mpmath precision is process-global state

# Lanczos coefficients for g = 607/128, n = 15 (Godfrey's set; ~15 correct
# digits for Re(z) >= 1/2).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

# B_{2j}/(2j)! for j = 1..14, exact fractions rounded once.
_BERNOULLI = (
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6),
    Fraction(-3617, 510), Fraction(43867, 798), Fraction(-174611, 330),
    Fraction(854513, 138), Fraction(-236364091, 2730), Fraction(8553103, 6),
    Fraction(-23749461029, 870),
)
_B2J_OVER_FACT = tuple(
    float(b) / math.factorial(2 * j) for j, b in enumerate(_BERNOULLI, start=1)
)


def _as_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite argument {z!r}")
    return z


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real)


def _log_sin_pi(z: complex) -> complex:
    """log(sin(pi z)), stable for large |Im z|."""
    if z.imag < 0.0:
        return _log_sin_pi(z.conjugate()).conjugate()
    # sin(pi z) = exp(-i pi z) (1 - exp(2 i pi z)) * (i/2)
    w = cmath.exp(2j * cmath.pi * z)
    return -1j * cmath.pi * z + cmath.log(1.0 - w) + cmath.log(0.5j)


def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z).

    Raises PoleError at the poles z = 0, -1, -2, ...
    """
    z = _as_complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"log_gamma pole at z={z}")
    if z.real < 0.5:
        # Reflection; adequate away from the negative real axis, which is all
        # the operating region ever needs (Re(2s+j+m) stays positive here).
        return math.log(math.pi) - _log_sin_pi(z) - log_gamma(1.0 - z)
    x = z - 1.0
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (x + k)
    t = x + _LANCZOS_G + 0.5
    out = 0.5 * math.log(2.0 * math.pi) + (x + 0.5) * cmath.log(t) - t + cmath.log(acc)
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise OverflowError(f"log_gamma overflow at z={z}")
    return out


def hurwitz_zeta(w, q, n_terms: int = 50, bernoulli_terms: int = 10) -> complex:
    """Hurwitz zeta  zeta(w; q) = sum_{n>=0} (q+n)^(-w)  by Euler-Maclaurin.

    Guaranteed for Re(w) > 1, Re(q) > 0; the same formula analytically
    continues to Re(w) > 1 - 2*bernoulli_terms, which the determinant code
    relies on for critical-line scans.
    """
    w = _as_complex(w)
    q = _as_complex(q)
    if w == 1.0:
        raise PoleError("hurwitz_zeta pole at w=1")
    if q.real <= 0.0:
        raise DomainError(f"hurwitz_zeta requires Re(q) > 0, got q={q}")
    if bernoulli_terms > len(_B2J_OVER_FACT):
        raise ValueError(f"at most {len(_B2J_OVER_FACT)} Bernoulli terms available")

    # More head terms when Im(w) is large keeps the correction series decaying.
    n = max(n_terms, int(2.0 * abs(w.imag)) + 10)
    ns = np.arange(n, dtype=np.float64)
    base = q + ns
    head = complex(np.sum(base ** (-w)))

    a = q + n
    tail = a ** (1.0 - w) / (w - 1.0) + 0.5 * a ** (-w)
    rising = 1.0 + 0.0j  # (w)_{2j-1} accumulated incrementally
    apow = a ** (-w - 1.0)
    inv_a2 = 1.0 / (a * a)
    for j in range(1, bernoulli_terms + 1):
        if j == 1:
            rising = w
        else:
            rising *= (w + 2 * j - 3) * (w + 2 * j - 2)
            apow *= inv_a2
        tail += _B2J_OVER_FACT[j - 1] * rising * apow
    out = head + tail
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise OverflowError(f"hurwitz_zeta overflow at w={w}, q={q}")
    return out


def riemann_zeta(s, n_terms: int = 50, bernoulli_terms: int = 10) -> complex:
    """Riemann zeta(s) (Euler-Maclaurin; zeta(s) = hurwitz_zeta(s, 1))."""
    s = _as_complex(s)
    if s == 1.0:
        raise PoleError("riemann_zeta pole at s=1")
    return hurwitz_zeta(s, 1.0, n_terms=n_terms, bernoulli_terms=bernoulli_terms)


_BESSEL_MAX_TERMS = 10_000
_BESSEL_STOP = 1e-17
_BESSEL_LOSS_LIMIT = 3e3  # digits lost in doubles before escalating


def _bessel_series_float(nu: complex, u: complex) -> tuple[complex, float]:
    """Double-precision power series; returns (sum, max |term| seen)."""
    term = cmath.exp(nu * cmath.log(u / 2.0) - log_gamma(nu + 1.0))
    total = term
    peak = abs(term)
    z2 = -(u * u) / 4.0
    for k in range(1, _BESSEL_MAX_TERMS + 1):
        term *= z2 / (k * (k + nu))
        total += term
        peak = max(peak, abs(term))
        if abs(term) < _BESSEL_STOP * abs(total):
            return total, peak
    raise NonConvergenceError(
        f"bessel_j series did not converge within {_BESSEL_MAX_TERMS} terms "
        f"(nu={nu}, u={u})"
    )


def _bessel_series_mp(nu: complex, u: complex, dps: int) -> complex:
    import mpmath as mp

    with _MP_LOCK, mp.workdps(dps):
        nu_m = mp.mpc(nu)
        u_m = mp.mpc(u)
        term = mp.exp(nu_m * mp.log(u_m / 2) - mp.loggamma(nu_m + 1))
        total = term
        z2 = -(u_m * u_m) / 4
        for k in range(1, _BESSEL_MAX_TERMS + 1):
            term *= z2 / (k * (k + nu_m))
            total += term
            if abs(term) < mp.mpf(_BESSEL_STOP) * abs(total):
                return complex(total)
    raise NonConvergenceError(f"bessel_j mp series did not converge (nu={nu}, u={u})")


def bessel_j(nu, u) -> complex:
    """Bessel function J_nu(u) of complex order, by its power series.

    Terms are added until |term| < 1e-17 |sum|.  When the double-precision
    sum would cancel away more than ~3 digits of headroom the series is
    re-run in multi-precision, so the result stays good to ~1e-12 relative
    well past |u| = 50.
    """
    nu = _as_complex(nu)
    u = _as_complex(u)
    if u == 0.0:
        if nu == 0.0:
            return 1.0 + 0.0j
        if nu.real > 0.0:
            return 0.0 + 0.0j
        raise DomainError(f"bessel_j undefined at u=0 for Re(nu) <= 0 (nu={nu})")
    nu_is_integer = nu.imag == 0.0 and nu.real == int(nu.real)
    if u.imag == 0.0 and u.real < 0.0 and not nu_is_integer:
        raise DomainError("bessel_j: u on the negative real axis with non-integer nu")
    if nu_is_integer and nu.real < 0.0:
        # J_{-n} = (-1)^n J_n keeps the leading term away from gamma poles.
        n = int(-nu.real)
        return (-1.0) ** n * bessel_j(n, u)
    total, peak = _bessel_series_float(nu, u)
    loss = peak / max(abs(total), 1e-300)
    if loss > _BESSEL_LOSS_LIMIT:
        dps = 26 + int(math.log10(loss))
        total = _bessel_series_mp(nu, u, dps)
    if not (math.isfinite(total.real) and math.isfinite(total.imag)):
        raise OverflowError(f"bessel_j overflow at nu={nu}, u={u}")
    return total
