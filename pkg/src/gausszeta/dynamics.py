"""Symbolic dynamics of the Gauss map.

Continued-fraction words label the periodic orbits: the word (i_1, ..., i_n)
stands for the composition psi_{i_n} o ... o psi_{i_1} of inverse branches
psi_k(z) = 1/(z+k), whose unique fixed point in (0,1) is the purely periodic
continued fraction [0; bar(i_n, ..., i_1)].  Fixed points and orbit products
are kept exact as quadratic surds; even-length words map to hyperbolic
conjugacy classes of the modular group through the two-by-two integer matrix
product of (0 1; 1 i_k) factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as _iproduct
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, ParityError, ResourceError

__all__ = [
    "Word",
    "QuadraticSurd",
    "HyperbolicClass",
    "gauss_map",
    "word_matrix",
    "fixed_point_matrix",
    "periodic_point",
    "orbit_product",
    "orbit_product_surd",
    "enumerate_fix_words",
    "canonical_rotation",
    "primitive_period",
    "reduced_matrix",
    "enumerate_classes",
    "classes_to_csv",
    "ENUMERATION_CAP",
]

Word = tuple[int, ...]

ENUMERATION_CAP = 10_000_000  # max words a single enumeration may produce
_FACTOR_BUDGET = 10**30  # surd normalization refuses discriminants beyond this


def _check_word(word: Sequence[int]) -> Word:
    w = tuple(int(i) for i in word)
    if not w:
        raise DomainError("empty continued-fraction word")
    if any(i < 1 for i in w):
        raise DomainError(f"word digits must be positive integers, got {w}")
    return w


def gauss_map(x: float) -> float:
    """T(x) = 1/x mod 1 on [0,1], with T(0) = 0."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"gauss_map domain is [0,1], got {x}")
    if x == 0.0:
        return 0.0
    return (1.0 / x) % 1.0


# -- exact quadratic surds --------------------------------------------------

def _squarefree_split(d: int) -> tuple[int, int]:
    """d = core * f**2 with core squarefree; trial division, sympy fallback."""
    if d > _FACTOR_BUDGET:
        raise ResourceError(f"discriminant {d} exceeds factorization budget")
    core, f = 1, 1
    if d < 10**10:
        p = 2
        while p * p <= d:
            if d % p == 0:
                e = 0
                while d % p == 0:
                    d //= p
                    e += 1
                f *= p ** (e // 2)
                if e % 2:
                    core *= p
            p += 1 if p == 2 else 2
        core *= d
        return core, f
    from sympy import factorint

    for p, e in factorint(d).items():
        f *= p ** (e // 2)
        if e % 2:
            core *= p
    return core, f


@dataclass(frozen=True)
class QuadraticSurd:
    """Exact value (p + q*sqrt(d))/r with d squarefree, r > 0, gcd(p,q,r)=1."""

    p: int
    q: int
    d: int
    r: int

    @classmethod
    def make(cls, p: int, q: int, d: int, r: int) -> "QuadraticSurd":
        if r == 0:
            raise DomainError("surd denominator must be nonzero")
        if d <= 0 or math.isqrt(d) ** 2 == d:
            raise DomainError(f"surd discriminant must be a positive non-square, got {d}")
        core, f = _squarefree_split(d)
        q *= f
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(abs(p), abs(q)), r)
        return cls(p // g, q // g, core, r // g)

    def __mul__(self, other: "QuadraticSurd") -> "QuadraticSurd":
        if self.d != other.d:
            raise DomainError("cannot multiply surds from different quadratic fields")
        p = self.p * other.p + self.q * other.q * self.d
        q = self.p * other.q + self.q * other.p
        return QuadraticSurd.make(p, q, self.d, self.r * other.r)

    def __float__(self) -> float:
        # isqrt-based square root keeps large d accurate to the last bit.
        scale = 10**24
        root = math.isqrt(self.d * scale * scale) / scale
        if self.p * self.q < 0:
            # p and q*sqrt(d) nearly cancel; rationalize to keep full precision
            num = self.p * self.p - self.q * self.q * self.d
            return num / (self.r * (self.p - self.q * root))
        return (self.p + self.q * root) / self.r

    def satisfies(self, a: int, b: int, c: int) -> bool:
        """Exact check of a*x**2 + b*x + c = 0 for this x."""
        rational = a * (self.p * self.p + self.q * self.q * self.d) \
            + b * self.p * self.r + c * self.r * self.r
        irrational = 2 * a * self.p * self.q + b * self.q * self.r
        return rational == 0 and irrational == 0


_B1 = (0, 1, 1, 1)


def _mat_mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _digit_matrix(i: int):
    return (0, 1, 1, i)


def word_matrix(word: Sequence[int]) -> tuple[int, int, int, int]:
    """Product of (0 1; 1 i_k) factors in word order (the reduced-matrix order)."""
    w = _check_word(word)
    m = (1, 0, 0, 1)
    for i in w:
        m = _mat_mul(m, _digit_matrix(i))
    return m


def fixed_point_matrix(word: Sequence[int]) -> tuple[int, int, int, int]:
    """Matrix of psi_{i_n} o ... o psi_{i_1}: factors in reversed word order."""
    return word_matrix(tuple(reversed(_check_word(word))))


def periodic_point(word: Sequence[int]) -> QuadraticSurd:
    """Exact fixed point in (0,1) of the branch composition labeled by ``word``.

    Solves the Moebius fixed-point quadratic c z^2 + (d-a) z - b = 0 of the
    integer matrix of the composition; the positive root is returned.
    """
    w = _check_word(word)
    a, b, c, d = fixed_point_matrix(w)
    det = -1 if len(w) % 2 else 1
    disc = (a + d) * (a + d) - 4 * det
    z = QuadraticSurd.make(a - d, 1, disc, 2 * c)
    zf = float(z)
    if not 0.0 < zf < 1.0:
        raise DomainError(f"fixed point {zf} escaped (0,1) for word {w}")
    return z


def orbit_product_surd(word: Sequence[int]) -> QuadraticSurd:
    """prod_{k<n} T^k(z_word) as an exact surd (shift the word, never iterate)."""
    w = _check_word(word)
    total = None
    for k in range(len(w)):
        rotated = w[-k:] + w[:-k]  # T^k on the fixed point = right rotation by k
        z = periodic_point(rotated)
        total = z if total is None else total * z
    return total


def orbit_product(word: Sequence[int]) -> float:
    value = float(orbit_product_surd(word))
    if not 0.0 < value < 1.0:
        raise DomainError(f"orbit product {value} escaped (0,1) for word {word}")
    return value


def enumerate_fix_words(n: int, max_digit: int,
                        cap: int = ENUMERATION_CAP) -> list[Word]:
    """All digit words of length n with entries in [1, max_digit], lex order."""
    if n < 1 or max_digit < 1:
        raise DomainError("enumerate_fix_words requires n >= 1 and max_digit >= 1")
    if max_digit ** n > cap:
        raise ResourceError(
            f"enumeration of {max_digit}**{n} words exceeds cap {cap}")
    return [w for w in _iproduct(range(1, max_digit + 1), repeat=n)]


def canonical_rotation(word: Sequence[int]) -> Word:
    """Lexicographically least rotation; equal iff same periodic orbit."""
    w = _check_word(word)
    return min(w[k:] + w[:k] for k in range(len(w)))


def primitive_period(word: Sequence[int]) -> int:
    """Smallest p | len(word) with word = (word[:p]) * (len(word)//p)."""
    w = _check_word(word)
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w == w[:p] * (n // p):
            return p
    raise AssertionError("unreachable")


def _sl2_power_index(word: Word) -> int:
    """Largest k with the word matrix a k-th power inside SL(2,Z).

    An odd repetition block has determinant -1, so only its square lies in
    SL(2,Z); that halves the naive repetition count.
    """
    n = len(word)
    p = primitive_period(word)
    return n // p if p % 2 == 0 else n // (2 * p)


@dataclass(frozen=True)
class HyperbolicClass:
    """A hyperbolic conjugacy class presented by a reduced word of length 2l."""

    word: Word
    matrix: tuple[int, int, int, int]
    matrix_trace: int
    norm: float
    length_l: int
    primitivity_k: int
    geodesic_length: float


def _norm_from_trace(t: int) -> float:
    rho = (t + math.sqrt(t * t - 4.0)) / 2.0
    return rho * rho


def reduced_matrix(word: Sequence[int]) -> HyperbolicClass:
    """Hyperbolic class data of the even-length word's reduced matrix."""
    w = _check_word(word)
    if len(w) % 2:
        raise ParityError(
            f"reduced matrices need even-length words, got length {len(w)}")
    m = word_matrix(w)
    t = m[0] + m[3]
    if t < 3:
        raise DomainError(f"word {w} gives trace {t} < 3 (not hyperbolic)")
    norm = _norm_from_trace(t)
    return HyperbolicClass(
        word=w,
        matrix=m,
        matrix_trace=t,
        norm=norm,
        length_l=len(w) // 2,
        primitivity_k=_sl2_power_index(w),
        geodesic_length=math.log(norm),
    )


def psl_class_count(word: Sequence[int]) -> int:
    """Number of PSL(2,Z) conjugacy classes sharing this rotation class.

    Odd rotations conjugate by a determinant -1 factor, so a word whose
    primitive block has even length splits into two PSL(2,Z) classes (the
    geodesic and its reverse); an odd block folds them into one.
    """
    return 1 if primitive_period(word) % 2 else 2


def _max_trace_for_norm(norm_cap: float) -> int:
    if norm_cap <= _norm_from_trace(3):
        return 0 if norm_cap < _norm_from_trace(3) else 3
    t = int(math.sqrt(norm_cap) + 1.0 / math.sqrt(norm_cap) + 1e-12)
    while _norm_from_trace(t) > norm_cap:
        t -= 1
    while _norm_from_trace(t + 1) <= norm_cap:
        t += 1
    return t


def _fib_pair(r: int) -> tuple[int, int, int]:
    """(F_{r-1}, F_r, F_{r+1}) so that B_1**r = (F_{r-1} F_r; F_r F_{r+1})."""
    a, b = 1, 0  # F_{-1}, F_0
    for _ in range(r):
        a, b = b, a + b
    return a, b, a + b


def _words_with_trace_cap(length: int, t_cap: int, max_digit: int | None,
                          budget: list[int]) -> Iterator[tuple[Word, int]]:
    """Depth-first enumeration of words with matrix trace <= t_cap.

    Prunes on the all-ones completion, which minimizes the final trace among
    all extensions (matrix entries are monotone in every digit).
    """
    fibs = [_fib_pair(r) for r in range(length + 1)]

    def rec(prefix: list[int], m: tuple[int, int, int, int]) -> Iterator[tuple[Word, int]]:
        depth = len(prefix)
        if depth == length:
            t = m[0] + m[3]
            if t <= t_cap:
                yield tuple(prefix), t
            return
        fm1, f0, fp1 = fibs[length - depth - 1]  # positions left after this one
        digit = 1
        while max_digit is None or digit <= max_digit:
            budget[0] -= 1
            if budget[0] < 0:
                raise ResourceError("class enumeration budget exhausted")
            m2 = _mat_mul(m, _digit_matrix(digit))
            low = m2[0] * fm1 + (m2[1] + m2[2]) * f0 + m2[3] * fp1
            if low > t_cap:
                break  # larger digits only increase the bound
            prefix.append(digit)
            yield from rec(prefix, m2)
            prefix.pop()
            digit += 1

    yield from rec([], (1, 0, 0, 1))


def enumerate_classes(norm_cap: float, length_cap: int,
                      budget: int = 2_000_000) -> list[HyperbolicClass]:
    """One class per rotation-equivalence class of even words under the caps.

    Non-primitive classes are included (primitivity_k > 1); deterministic
    order by (norm, canonical word).
    """
    if norm_cap <= 1.0:
        raise DomainError("norm_cap must exceed 1")
    if length_cap < 1:
        raise DomainError("length_cap must be >= 1")
    t_cap = _max_trace_for_norm(norm_cap)
    if t_cap < 3:
        return []
    seen: set[Word] = set()
    classes: list[HyperbolicClass] = []
    counter = [budget]
    for l in range(1, length_cap + 1):
        for word, _t in _words_with_trace_cap(2 * l, t_cap, None, counter):
            canon = canonical_rotation(word)
            if canon in seen:
                continue
            seen.add(canon)
            classes.append(reduced_matrix(canon))
    classes.sort(key=lambda c: (c.norm, c.word))
    return classes


_CSV_HEADER = "word,trace,norm,length_l,primitivity_k,geodesic_length"


def classes_to_csv(classes: Iterable[HyperbolicClass]) -> str:
    """Census CSV; word digits joined by '-'; 17 significant digits."""
    lines = [_CSV_HEADER]
    for c in classes:
        lines.append(",".join([
            "-".join(str(i) for i in c.word),
            str(c.matrix_trace),
            format(c.norm, ".17g"),
            str(c.length_l),
            str(c.primitivity_k),
            format(c.geodesic_length, ".17g"),
        ]))
    return "\n".join(lines) + "\n"
