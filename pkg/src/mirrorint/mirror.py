"""Series families attached to a form system, and integrality scans.

From a :class:`~mirrorint.forms.FormSystem` this module expands

  * ``F``: the generating series with coefficients Q(n);
  * ``G_k``: companions whose coefficients carry the harmonic weight of
    the k-th coordinate (so that G_k + log(z_k) F solves the same system
    of differential equations as F);
  * ``G_L``: companions weighted by H(L.n) for an admissible vector L;
  * canonical coordinates q_k = z_k exp(G_k / F) and their compositional
    inverse, the mirror maps z(q);
  * mirror-type maps q_L = exp(G_L / F).

The canonical coordinate factors through the mirror-type maps: q_k / z_k
equals the product of q_(e_i) to the power e_i[k] divided by the product
of q_(f_j) to the power f_j[k]; ``check_factorization`` verifies this as
truncated series.  ``integrality_scan`` reports coefficients that fail to
be integers (or p-adic integers for a given prime).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .forms import FormSystem, dot, factorial_ratio, harmonic, vp_of_rational
from .landau import enumerate_weight_vectors
from .series import MSeries, invert_diagonal

Exponent = tuple[int, ...]


def exponents_upto(d: int, order: int):
    """All exponent vectors of total degree <= order, lexicographically."""
    for v in itertools.product(range(order + 1), repeat=d):
        if sum(v) <= order:
            yield v


def build_F(sys: FormSystem, order: int) -> MSeries:
    """The series whose coefficient at z^n is the factorial ratio Q(n)."""
    terms = {v: factorial_ratio(sys, v) for v in exponents_upto(sys.d, order)}
    return MSeries(sys.d, order, terms)


def _gk_weight(sys: FormSystem, k: int, n: Exponent) -> Fraction:
    w = Fraction(0)
    for v in sys.e:
        if v[k]:
            w += v[k] * harmonic(dot(v, n))
    for v in sys.f:
        if v[k]:
            w -= v[k] * harmonic(dot(v, n))
    return w


def build_Gk(sys: FormSystem, k: int, order: int) -> MSeries:
    """Harmonic companion for coordinate k (1-based): Q(n) times the
    weight sum(e_i[k] H(e_i.n)) - sum(f_j[k] H(f_j.n))."""
    if not 1 <= k <= sys.d:
        raise ValueError(f"coordinate {k} out of range 1..{sys.d}")
    terms = {}
    for v in exponents_upto(sys.d, order):
        w = _gk_weight(sys, k - 1, v)
        if w:
            terms[v] = factorial_ratio(sys, v) * w
    return MSeries(sys.d, order, terms)


def build_GL(sys: FormSystem, L: Sequence[int], order: int) -> MSeries:
    """Companion weighted by H(L.n), for L dominated by some form vector."""
    L = tuple(int(c) for c in L)
    if L not in set(enumerate_weight_vectors(sys)):
        raise ValueError(f"{L} is not dominated by any form vector")
    terms = {}
    for v in exponents_upto(sys.d, order):
        m = dot(L, v)
        if m:
            terms[v] = factorial_ratio(sys, v) * harmonic(m)
    return MSeries(sys.d, order, terms)


@dataclass
class MirrorBundle:
    """All series of one system at one truncation order.

    ``q[k]`` is z_k times a unit, ``qL[L]`` a unit with constant term 1,
    and ``zofq`` inverts the q map up to the order.  ``flagged`` marks the
    regime where the column sums of e and f differ (the same formulas are
    used; the integrality theory then predicts p-adic failures).
    """

    sys: FormSystem
    order: int
    F: MSeries
    G: tuple[MSeries, ...]
    GL: dict[Exponent, MSeries]
    q: tuple[MSeries, ...]
    qL: dict[Exponent, MSeries]
    zofq: tuple[MSeries, ...]
    flagged: bool = False


def build_bundle(sys: FormSystem, order: int) -> MirrorBundle:
    """Construct every series of the bundle, mutually consistent."""
    F = build_F(sys, order)
    recip_F = F.reciprocal()
    G = tuple(build_Gk(sys, k, order) for k in range(1, sys.d + 1))
    q = tuple(
        MSeries.variable(sys.d, order, k) * (G[k] * recip_F).exp()
        for k in range(sys.d)
    )
    GL = {}
    qL = {}
    for L in enumerate_weight_vectors(sys):
        GL[L] = build_GL(sys, L, order)
        qL[L] = (GL[L] * recip_F).exp()
    zofq = tuple(invert_diagonal(list(q)))
    return MirrorBundle(
        sys=sys,
        order=order,
        F=F,
        G=G,
        GL=GL,
        q=q,
        qL=qL,
        zofq=zofq,
        flagged=sys.sum_e != sys.sum_f,
    )


@dataclass(frozen=True)
class FactorizationResult:
    """Outcome of the product identity check; falsy when a side differs."""

    ok: bool
    coordinate: Optional[int] = None
    exponent: Optional[Exponent] = None

    def __bool__(self):
        return self.ok


def check_factorization(bundle: MirrorBundle) -> FactorizationResult:
    """Verify q_k / z_k = prod q_(e_i)^(e_i[k]) / prod q_(f_j)^(f_j[k]).

    Both sides are expanded independently as truncated series for every
    coordinate; the first differing coefficient, if any, is reported.
    The left side is rebuilt as exp(G_k / F) so that both sides carry the
    full truncation order (the stored q_k, being z_k times the unit, only
    determines the unit one order down).
    """
    sys = bundle.sys
    recip_F = bundle.F.reciprocal()
    for k in range(sys.d):
        lhs = (bundle.G[k] * recip_F).exp()
        weights: Counter = Counter()
        for v in sys.e:
            if v[k]:
                weights[v] += v[k]
        for v in sys.f:
            if v[k]:
                weights[v] -= v[k]
        rhs = MSeries.one(sys.d, bundle.order)
        for form, power in sorted(weights.items()):
            if power:
                rhs = rhs * (bundle.qL[form] ** power)
        if lhs != rhs:
            diff = lhs - rhs
            exponent = diff.items()[0][0]
            return FactorizationResult(False, coordinate=k + 1, exponent=exponent)
    return FactorizationResult(True)


@dataclass(frozen=True)
class ScanViolation:
    exponent: Exponent
    coefficient: Fraction
    valuation: Optional[int] = None


@dataclass(frozen=True)
class ScanReport:
    """Exponents whose coefficients fail integrality, in lexicographic order.

    With no prime, a violation is a coefficient with denominator != 1;
    with a prime p, one with negative p-adic valuation.  At most ``limit``
    violations are stored; ``total`` counts them all.
    """

    prime: Optional[int]
    violations: tuple[ScanViolation, ...]
    total: int
    limit: int = 20

    @property
    def ok(self) -> bool:
        return self.total == 0

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "total": self.total,
            "violations": [
                {
                    "exp": list(v.exponent),
                    "num": str(v.coefficient.numerator),
                    "den": str(v.coefficient.denominator),
                    **({"vp": v.valuation} if v.valuation is not None else {}),
                }
                for v in self.violations
            ],
        }


def integrality_scan(s: MSeries, p: Optional[int] = None, limit: int = 20) -> ScanReport:
    """Report every truncation-order coefficient that is not (p-)integral."""
    found = []
    total = 0
    for v, c in s.items():
        if p is None:
            bad = c.denominator != 1
            val = None
        else:
            val = vp_of_rational(c, p)
            bad = val < 0
        if bad:
            total += 1
            if len(found) < limit:
                found.append(ScanViolation(v, c, val))
    return ScanReport(prime=p, violations=tuple(found), total=total, limit=limit)
