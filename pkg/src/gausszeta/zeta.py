"""Dynamical and Selberg zeta functions built on the transfer operator.

Identities implemented:
  xi(s)  = det(1 + L_{s+1}) / det(1 - L_s)
  eta(s) = det(1 - L_{s+1}^2) / det(1 - L_s^2)
  Z(s)   = det(1 - L_s^2)          (primary definition, valid past Re(s)=1)
  1/Z(s) = prod_{l>=0} eta(s+l)
plus two convergent-product oracles for Re(s) > 1: the Euler product over
primitive hyperbolic classes and the reduced-matrix (word) sum.

A rotation class of words whose primitive block has even length covers two
conjugacy classes (a geodesic and its reverse, conjugate only through a
determinant -1 element), while an odd block covers one; the Euler product
squares the former's factors.  The reduced-word sum carries weight 1/(2l)
per word and is doubled in the exponent: the doubling is the two spin lifts
of each orbit, the same factor 2 the eta orbit formula carries.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import dynamics, spectral, specfun
from .errors import DomainError
from .spectral import det_finite, word_power_sum

__all__ = [
    "ZetaValue",
    "POLE_THRESHOLD",
    "xi_det_ratio",
    "eta_det_ratio",
    "xi_orbit_exponential",
    "eta_orbit_exponential",
    "eta_euler_product",
    "selberg_euler_product",
    "selberg_det_identity",
    "lemma9_partial",
    "lewis_zagier_log_z",
]

POLE_THRESHOLD = 1e-13


@dataclass(frozen=True)
class ZetaValue:
    s: complex
    value: complex
    route: str  # det-ratio | euler-product | det-identity | reduced-sum | orbit-sum
    caps: dict = field(default_factory=dict)
    tail: float = 0.0
    pole: bool = False
    numerator: complex | None = None
    denominator: complex | None = None
    aux: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "s": [self.s.real, self.s.imag],
            "value": [self.value.real, self.value.imag],
            "route": self.route,
            "caps": self.caps,
            "tail": self.tail,
        }
        if self.pole:
            out["pole"] = True
            out["numerator"] = [self.numerator.real, self.numerator.imag]
            out["denominator"] = [self.denominator.real, self.denominator.imag]
        return out


def _ratio(s: complex, num: complex, den: complex, route: str,
           caps: dict) -> ZetaValue:
    pole = abs(den) < POLE_THRESHOLD
    value = num / den if den != 0.0 else complex(math.inf, 0.0)
    return ZetaValue(s=complex(s), value=value, route=route, caps=caps,
                     pole=pole, numerator=num, denominator=den)


def xi_det_ratio(s: complex, m_order: int = 64) -> ZetaValue:
    """xi(s) = det(1 + L_{s+1}) / det(1 - L_s); pole flagged, not raised."""
    s = complex(s)
    num = det_finite(s + 1.0, "plus", m_order).value
    den = det_finite(s, "minus", m_order).value
    return _ratio(s, num, den, "det-ratio", {"M": m_order, "kind": "xi"})


def eta_det_ratio(s: complex, m_order: int = 64) -> ZetaValue:
    """eta(s) = det(1 - L_{s+1}^2) / det(1 - L_s^2)."""
    s = complex(s)
    num = det_finite(s + 1.0, "minus-square", m_order).value
    den = det_finite(s, "minus-square", m_order).value
    return _ratio(s, num, den, "det-ratio", {"M": m_order, "kind": "eta"})


def _orbit_log_terms(s: complex, n_values, max_digit: int | None,
                     budget: int = spectral.ENUM_BUDGET):
    """Fix-point sums X_n = sum_w pi_w^(2s) for the requested powers."""
    out = {}
    bound = 0.0
    for n in n_values:
        cap = max(2, int(budget ** (1.0 / n)))
        if max_digit is not None:
            cap = min(cap, max_digit)
        value, tb = word_power_sum(s, n, cap, with_denominator=False)
        out[n] = value
        bound += tb / n
    return out, bound


def xi_orbit_exponential(s: complex, n_max: int = 12,
                         max_digit: int | None = None,
                         extrapolate: bool = True) -> ZetaValue:
    """xi(s) from its defining exponential over fixed-point sums.

    xi(s) = exp(sum_n (1/n) X_n); powers past min(n_max, 8) are closed by a
    two-eigenvalue Prony fit of the last computed sums.
    """
    s = complex(s)
    n_enum = min(n_max, 8)
    xs, bound = _orbit_log_terms(s, range(1, n_enum + 1), max_digit)
    seq = [xs[n] for n in range(1, n_enum + 1)]
    log_sum = sum(x / n for n, x in enumerate(seq, start=1))
    if extrapolate:
        tail, tail_err = spectral.two_term_log_tail(seq)
        log_sum += tail
        bound += tail_err
    return ZetaValue(s=s, value=cmath.exp(log_sum), route="orbit-sum",
                     caps={"n_max": n_enum, "max_digit": max_digit},
                     tail=bound, aux={"log_sum": log_sum})


def eta_orbit_exponential(s: complex, n_max: int = 10,
                          max_digit: int | None = None,
                          extrapolate: bool = True) -> ZetaValue:
    """eta(s) = exp(2 sum_{n even} (1/n) X_n): only even powers occur because
    odd powers of the spin-extended map have no fixed points.

    Writing n = 2m this is sum_m X_{2m}/m, closed by the same Prony tail.
    """
    s = complex(s)
    m_enum = max(4, min(n_max, 12) // 2)
    evens = [2 * m for m in range(1, m_enum + 1)]
    xs, bound = _orbit_log_terms(s, evens, max_digit)
    seq = [xs[n] for n in evens]
    log_sum = sum(x / m for m, x in enumerate(seq, start=1))
    if extrapolate:
        tail, tail_err = spectral.two_term_log_tail(seq)
        log_sum += tail
        bound += tail_err
    return ZetaValue(s=s, value=cmath.exp(log_sum), route="orbit-sum",
                     caps={"n_max": 2 * m_enum, "max_digit": max_digit},
                     tail=bound, aux={"log_sum": log_sum})


def _primitive_classes_by_length(length: int, max_digit: int,
                                 trace_cap: int) -> list[tuple[int, int]]:
    """(trace, word length) per primitive rotation class of this length."""
    seen = set()
    out = []
    counter = [4 * spectral.ENUM_BUDGET]
    for word, t in dynamics._words_with_trace_cap(length, trace_cap,
                                                  max_digit, counter):
        canon = dynamics.canonical_rotation(word)
        if canon in seen:
            continue
        seen.add(canon)
        if dynamics.primitive_period(canon) == length:
            out.append((t, length))
    return out


def eta_euler_product(s: complex, r_max: int = 6, max_digit: int = 40,
                      trace_cap: int = 1500) -> ZetaValue:
    """eta(s) as an Euler product over primitive Gauss-map orbits.

    Even-period orbits contribute (1 - pi^2s)^-2 (two spin lifts each);
    odd-period orbits lift to a single orbit of doubled period and weight
    pi^2, contributing (1 - pi^4s)^-1.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise DomainError("eta Euler product converges for Re(s) > 1")
    log_sum = 0.0 + 0.0j
    for length in range(1, r_max + 1):
        classes = _primitive_classes_by_length(length, max_digit, trace_cap)
        delta = -1.0 if length % 2 else 1.0
        for t, _ in classes:
            rho = (t + math.sqrt(t * t - 4.0 * delta)) / 2.0
            pi = 1.0 / rho
            if length % 2 == 0:
                log_sum -= 2.0 * cmath.log(1.0 - pi ** (2.0 * s))
            elif 2 * length <= r_max:
                log_sum -= cmath.log(1.0 - pi ** (4.0 * s))
    return ZetaValue(s=s, value=cmath.exp(log_sum), route="euler-product",
                     caps={"r_max": r_max, "max_digit": max_digit,
                           "trace_cap": trace_cap})


def _auto_length_cap(norm_cap: float) -> int:
    # minimal trace at half-length l is the Lucas number L_{2l}
    t_cap = math.sqrt(norm_cap) + 1.0 / math.sqrt(norm_cap)
    l, a, b = 0, 2, 1  # Lucas numbers L_0, L_1
    while True:
        for _ in range(2):
            a, b = b, a + b
        l += 1
        if a > t_cap:
            return max(1, l)


def selberg_euler_product(s: complex, norm_cap: float = 10_000.0,
                          k_max: int | None = None) -> ZetaValue:
    """Z(s) = prod_{k>=0} prod_P (1 - N(P)^(-k-s)) over primitive classes.

    Each rotation class with an even primitive block is counted twice (its
    word and the reversed word are distinct conjugacy classes of equal norm);
    odd-block classes once.
    """
    s = complex(s)
    sigma = s.real
    if sigma <= 1.0:
        raise DomainError("the Euler product converges for Re(s) > 1")
    if norm_cap <= 6.0:
        raise DomainError("norm_cap must exceed the minimal norm ~6.85")
    classes = dynamics.enumerate_classes(norm_cap, _auto_length_cap(norm_cap))
    primitives = [c for c in classes if c.primitivity_k == 1]
    if k_max is None:
        k_max = (int(math.ceil(40.0 / math.log(primitives[0].norm)))
                 if primitives else 21)
    log_sum = 0.0 + 0.0j
    for c in primitives:
        weight = dynamics.psl_class_count(c.word)
        for k in range(k_max + 1):
            log_sum += weight * cmath.log(1.0 - c.norm ** (-(k + s)))
    tail = 2.0 * norm_cap ** (1.0 - sigma) / max((sigma - 1.0), 0.1) \
        / math.log(norm_cap)
    return ZetaValue(s=s, value=cmath.exp(log_sum), route="euler-product",
                     caps={"norm_cap": norm_cap, "k_max": k_max,
                           "classes": len(primitives)},
                     tail=tail)


def selberg_det_identity(s: complex, m_order: int = 64) -> ZetaValue:
    """Z(s) = det(1 - L_s^2): the primary route, valid past Re(s) = 1."""
    s = complex(s)
    det = det_finite(s, "minus-square", m_order)
    return ZetaValue(s=s, value=det.value, route="det-identity",
                     caps={"M": m_order})


def lemma9_partial(s: complex, partial_l: int, m_order: int = 64) -> ZetaValue:
    """prod_{l=0}^{L} eta(s+l), with the telescoped closed form attached.

    The product telescopes to det(1 - L_{s+L+1}^2)/det(1 - L_s^2); its
    reciprocal converges to Z(s) as L grows.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise DomainError("lemma9_partial requires Re(s) > 1")
    value = 1.0 + 0.0j
    for l in range(partial_l + 1):
        value *= eta_det_ratio(s + l, m_order).value
    telescoped = det_finite(s + partial_l + 1.0, "minus-square", m_order).value \
        / det_finite(s, "minus-square", m_order).value
    return ZetaValue(s=s, value=value, route="det-ratio",
                     caps={"L": partial_l, "M": m_order},
                     aux={"telescoped": telescoped})


def lewis_zagier_log_z(s: complex, l_max: int = 4, max_digit: int = 40,
                       trace_cap: int | None = None) -> ZetaValue:
    """Z(s) from the reduced-matrix sum.

    Every reduced matrix is a unique even word; each word of length 2l
    contributes N^(-s)/(1 - N^(-1)) with weight 1/(2l).  The exponential is
    taken of twice the sum (the two spin lifts per orbit), which is exactly
    what matches det(1 - L_s^2); the half sum itself is exposed in aux.
    """
    s = complex(s)
    sigma = s.real
    if sigma <= 1.0:
        raise DomainError("the reduced-matrix sum converges for Re(s) > 1")
    if trace_cap is None:
        trace_cap = min(4000, max(300, int(round(1e-12 ** (-1.0 / (2.0 * sigma))))))
    half_sum = 0.0 + 0.0j
    for l in range(1, l_max + 1):
        traces = spectral.capped_trace_array(2 * l, max_digit, trace_cap)
        tf = traces.astype(np.float64)
        rho = (tf + np.sqrt(tf * tf - 4.0)) / 2.0
        norms = rho * rho
        terms = norms ** (-s) / (1.0 - 1.0 / norms)
        half_sum += complex(np.sum(terms)) / (2.0 * l)
    # dropped mass: trace > cap (density ~ x per unit trace) and digits > cap
    tail = 2.0 * float(trace_cap) ** (2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0) \
        + 8.0 * l_max * specfun.hurwitz_zeta(2.0 * sigma, max_digit + 1.0).real
    return ZetaValue(s=s, value=cmath.exp(-2.0 * half_sum), route="reduced-sum",
                     caps={"l_max": l_max, "max_digit": max_digit,
                           "trace_cap": trace_cap},
                     tail=tail, aux={"half_log_sum": half_sum})
