"""Exact arithmetic kernel.

Factorial ratios of linear forms, harmonic numbers and p-adic valuations,
all over arbitrary-precision integers and rationals.  A ratio is described
by a :class:`FormSystem`: two sequences ``e`` and ``f`` of nonnegative
integer vectors in dimension ``d``.  The associated family of rationals is

    Q(n) = (e_1.n)! ... (e_q1.n)! / ((f_1.n)! ... (f_q2.n)!),

indexed by nonnegative integer vectors ``n``.  Everything in this module is
an immutable value and every operation is a pure function, so concurrent
use from any number of threads is safe.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

IntVec = tuple[int, ...]


class PadicInfinity:
    """Sentinel for the p-adic valuation of zero.

    Compares strictly greater than every integer and equal only to itself.
    Arithmetic with it raises, so it can never silently wrap around inside
    a congruence check.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("PadicInfinity")

    def __gt__(self, other):
        if isinstance(other, int) or other is self:
            return other is not self
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, int) or other is self:
            return True
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, int) or other is self:
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, int) or other is self:
            return other is self
        return NotImplemented


INFINITY = PadicInfinity()


def _as_intvec(v: Iterable[int]) -> IntVec:
    out = []
    for c in v:
        c = int(c)
        if c < 0:
            raise ValueError("form vectors must have nonnegative entries")
        out.append(c)
    return tuple(out)


class FormSystem:
    """Two sequences of nonnegative integer vectors defining a factorial ratio.

    The default constructor enforces the standing hypotheses of the
    integrality criteria: every vector is nonzero and the two sequences are
    disjoint as multisets.  Pass ``raw=True`` to lift both restrictions
    (needed for witness constructions and for preprocessed subsequences).
    """

    __slots__ = ("d", "e", "f", "raw", "sum_e", "sum_f")

    def __init__(self, e: Sequence[Iterable[int]], f: Sequence[Iterable[int]], raw: bool = False):
        e = tuple(_as_intvec(v) for v in e)
        f = tuple(_as_intvec(v) for v in f)
        if not e and not f:
            raise ValueError("at least one form vector is required")
        d = len(e[0]) if e else len(f[0])
        if d == 0:
            raise ValueError("dimension must be positive")
        for v in e + f:
            if len(v) != d:
                raise ValueError("all form vectors must share one dimension")
        if not raw:
            for v in e + f:
                if not any(v):
                    raise ValueError("zero form vector (use raw=True to allow)")
            common = set(e) & set(f)
            for v in common:
                if min(e.count(v), f.count(v)) > 0:
                    raise ValueError(
                        "e and f overlap as multisets (use raw=True to allow)"
                    )
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "raw", bool(raw))
        object.__setattr__(self, "sum_e", tuple(sum(v[i] for v in e) for i in range(d)))
        object.__setattr__(self, "sum_f", tuple(sum(v[i] for v in f) for i in range(d)))

    def __setattr__(self, name, value):
        raise AttributeError("FormSystem is immutable")

    @property
    def forms(self) -> tuple[IntVec, ...]:
        """All form vectors of ``e`` followed by those of ``f``."""
        return self.e + self.f

    def __eq__(self, other):
        if not isinstance(other, FormSystem):
            return NotImplemented
        return (self.e, self.f, self.raw) == (other.e, other.f, other.raw)

    def __hash__(self):
        return hash((self.e, self.f, self.raw))

    def __repr__(self):
        tail = ", raw=True" if self.raw else ""
        return f"FormSystem(e={list(self.e)}, f={list(self.f)}{tail})"

    def to_dict(self) -> dict:
        out = {"e": [list(v) for v in self.e], "f": [list(v) for v in self.f]}
        if self.raw:
            out["raw"] = True
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FormSystem":
        return cls(data["e"], data["f"], raw=bool(data.get("raw", False)))


def dot(u: Sequence, v: Sequence):
    """Scalar product of two equal-length vectors."""
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} != {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def _check_index(sys: FormSystem, n: Sequence[int]) -> IntVec:
    n = tuple(int(c) for c in n)
    if len(n) != sys.d:
        raise ValueError(f"index vector has length {len(n)}, expected {sys.d}")
    if any(c < 0 for c in n):
        raise ValueError("index vector must be componentwise nonnegative")
    return n


def factorial_ratio(sys: FormSystem, n: Sequence[int]) -> Fraction:
    """Exact value of Q(n) = prod (e_i.n)! / prod (f_j.n)!.

    Integer-valued for every ``n`` exactly when the Landau function of the
    system is nonnegative on the unit box; in general an exact rational.
    """
    n = _check_index(sys, n)
    num = 1
    for v in sys.e:
        num *= math.factorial(dot(v, n))
    den = 1
    for v in sys.f:
        den *= math.factorial(dot(v, n))
    return Fraction(num, den)


_HARMONIC: list[Fraction] = [Fraction(0)]


def harmonic(m: int) -> Fraction:
    """m-th harmonic number H_m = 1 + 1/2 + ... + 1/m, with H_0 = 0."""
    if m < 0:
        raise ValueError("harmonic index must be nonnegative")
    while len(_HARMONIC) <= m:
        k = len(_HARMONIC)
        _HARMONIC.append(_HARMONIC[-1] + Fraction(1, k))
    return _HARMONIC[m]


def is_prime(p: int) -> bool:
    """Trial-division primality test, ample for desk-scale primes."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


def _require_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def vp_int(n: int, p: int) -> int | PadicInfinity:
    """p-adic valuation of an integer; INFINITY for zero."""
    if n == 0:
        return INFINITY
    n = abs(n)
    v = 0
    while n % p == 0:
        v += 1
        n //= p
    return v


def vp_of_rational(x, p: int) -> int | PadicInfinity:
    """p-adic valuation of an exact rational; INFINITY for zero."""
    p = _require_prime(p)
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def vp_factorial(m: int, p: int) -> int:
    """Valuation of m! by the Legendre sum of floor(m / p^l)."""
    v = 0
    q = p
    while q <= m:
        v += m // q
        q *= p
    return v


def vp_ratio_legendre(sys: FormSystem, n: Sequence[int], p: int) -> int:
    """Valuation of Q(n) computed without building the rational.

    Sums Legendre terms over the linear-form values; the sum is finite
    because every floor vanishes once p^l exceeds the largest form value.
    """
    p = _require_prime(p)
    n = _check_index(sys, n)
    v = 0
    for w in sys.e:
        v += vp_factorial(dot(w, n), p)
    for w in sys.f:
        v -= vp_factorial(dot(w, n), p)
    return v
