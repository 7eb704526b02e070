"""Differential operators in theta form and the case-study engine.

A :class:`ThetaOperator` is sum_i z^i P_i(theta) with integer coefficient
polynomials P_i, acting formally on univariate log-series A + B log z.
A :class:`CaseRecord` ties an operator to a form system, a specialization
z_i = M_i t^(N_i) and a registered closed form for the holomorphic
solution; ``verify_annihilation`` replays the whole story to finite order:
the specialized series matches the closed form, the operator kills both it
and its log companion, and the associated q-parameter has integer
coefficients.

Records are plain JSON, so further catalog cases can be ingested without
code changes; the one bundled here is catalog case 30.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .forms import FormSystem, harmonic
from .landau import CriterionVerdict, SamplingStrategy, classify
from .mirror import build_F, build_Gk, integrality_scan
from .series import LogSeries, MSeries, apply_theta_poly


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def poly_from_factors(scale: int, factors: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Expand scale * prod(factors); each factor lists coefficients low to high."""
    acc = [scale]
    for f in factors:
        acc = _poly_mul(acc, list(f))
    return tuple(acc)


@dataclass(frozen=True)
class ThetaOperator:
    """sum_i z^i P_i(theta); polys[i] holds the coefficients of P_i, low to high."""

    polys: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.polys:
            raise ValueError("an operator needs at least one polynomial")
        object.__setattr__(
            self, "polys", tuple(tuple(int(c) for c in p) for p in self.polys)
        )

    @property
    def z_degree(self) -> int:
        return len(self.polys) - 1

    def __call__(self, s: LogSeries) -> LogSeries:
        return apply_theta_poly(self.polys, s)

    def to_dict(self) -> list[list[int]]:
        return [list(p) for p in self.polys]


def apply_operator(opr: ThetaOperator, s: LogSeries) -> LogSeries:
    """Apply the operator formally; the result is truncated to order N - v."""
    return opr(s)


# ---------------------------------------------------------------------------
# closed-form registry

ClosedForm = Callable[[int], Fraction]

_CLOSED_FORMS: dict[str, ClosedForm] = {}


def register_closed_form(name: str, fn: ClosedForm):
    _CLOSED_FORMS[name] = fn


def closed_form(name: str) -> ClosedForm:
    key = name.removeprefix("builtin:")
    try:
        return _CLOSED_FORMS[key]
    except KeyError:
        raise KeyError(f"no registered closed form {name!r}") from None


def _binom(n: int, k: int) -> int:
    return math.comb(n, k)


def case30_coefficient(n: int) -> Fraction:
    """(4n)! / ((n!)^2 (2n)!) times sum_k 4^k C(2(n-k), n-k)^2 C(2k, k)."""
    head = Fraction(
        math.factorial(4 * n), math.factorial(n) ** 2 * math.factorial(2 * n)
    )
    tail = sum(
        4**k * _binom(2 * (n - k), n - k) ** 2 * _binom(2 * k, k)
        for k in range(n + 1)
    )
    return head * tail


def case30_log_coefficient(n: int) -> Fraction:
    """Coefficient of the log companion in closed form: the same binomial
    sum weighted by 4 H(4n) - 2 H(n) - 2 H(2n) + 4 H(2(n-k)) - 4 H(n-k)."""
    head = Fraction(
        math.factorial(4 * n), math.factorial(n) ** 2 * math.factorial(2 * n)
    )
    tail = Fraction(0)
    for k in range(n + 1):
        weight = (
            4 * harmonic(4 * n)
            - 2 * harmonic(n)
            - 2 * harmonic(2 * n)
            + 4 * harmonic(2 * (n - k))
            - 4 * harmonic(n - k)
        )
        tail += 4**k * _binom(2 * (n - k), n - k) ** 2 * _binom(2 * k, k) * weight
    return head * tail


register_closed_form("case30", case30_coefficient)


# ---------------------------------------------------------------------------
# case records


@dataclass(frozen=True)
class CaseRecord:
    """An operator, a form system, specialization data and a closed form.

    The record asserts that specializing F along z_i = M_i t^(N_i) gives
    the closed-form series annihilated by the operator, and that the log
    companion built from coordinate k is annihilated alongside.
    """

    name: str
    operator: ThetaOperator
    system: FormSystem
    M: tuple[int, ...]
    Nexp: tuple[int, ...]
    k: int
    closed_form: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "theta_op": self.operator.to_dict(),
            "system": self.system.to_dict(),
            "special": {"M": list(self.M), "N": list(self.Nexp), "k": self.k},
            "closed_form": f"builtin:{self.closed_form.removeprefix('builtin:')}",
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CaseRecord":
        special = data["special"]
        return cls(
            name=data["name"],
            operator=ThetaOperator(tuple(tuple(p) for p in data["theta_op"])),
            system=FormSystem.from_dict(data["system"]),
            M=tuple(int(c) for c in special["M"]),
            Nexp=tuple(int(c) for c in special["N"]),
            k=int(special.get("k", 1)),
            closed_form=data["closed_form"],
        )


def case30_operator() -> ThetaOperator:
    """theta^4 - 16 z (4t+1)(4t+3)(8t^2+8t+3) + 4096 z^2 (4t+1)(4t+3)(4t+5)(4t+7)."""
    p0 = (0, 0, 0, 0, 1)
    p1 = poly_from_factors(-16, [(1, 4), (3, 4), (3, 8, 8)])
    p2 = poly_from_factors(4096, [(1, 4), (3, 4), (5, 4), (7, 4)])
    return ThetaOperator((p0, p1, p2))


def case30_system() -> FormSystem:
    return FormSystem(
        e=[(4, 4), (2, 0), (2, 0), (0, 2)],
        f=[(2, 2), (1, 1), (1, 1), (1, 0), (1, 0), (1, 0), (1, 0), (0, 1), (0, 1)],
    )


def case30_record() -> CaseRecord:
    return CaseRecord(
        name="case30",
        operator=case30_operator(),
        system=case30_system(),
        M=(1, 4),
        Nexp=(1, 1),
        k=1,
        closed_form="builtin:case30",
    )


BUNDLED_CASES = {"case30": case30_record}


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: Optional[str] = None


@dataclass(frozen=True)
class AnnihilationReport:
    case: str
    order: int
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "order": self.order,
            "pass": self.ok,
            "checks": [
                {"name": c.name, "pass": c.passed}
                | ({"detail": c.detail} if c.detail else {})
                for c in self.checks
            ],
        }


def verify_annihilation(rec: CaseRecord, order: int) -> AnnihilationReport:
    """Replay a case record to finite order.

    Four checks: the specialized series matches the registered closed form
    coefficientwise; the operator annihilates it; the operator annihilates
    the specialized log companion; and the q-parameter built from the two
    specialized series has integer coefficients.  Any mismatch reports its
    first failing order.
    """
    sys = rec.system
    evaluator = closed_form(rec.closed_form)
    F_spec = build_F(sys, order).specialize(rec.M, rec.Nexp)
    G_spec = build_Gk(sys, rec.k, order).specialize(rec.M, rec.Nexp)
    checks = []

    mismatch = next(
        (n for n in range(order + 1) if F_spec.coeff((n,)) != evaluator(n)), None
    )
    checks.append(
        CheckResult(
            "closed-form",
            mismatch is None,
            None if mismatch is None else f"first mismatch at order {mismatch}",
        )
    )

    killed_f = apply_operator(rec.operator, LogSeries.pure(F_spec))
    checks.append(
        CheckResult(
            "annihilates-series",
            killed_f.is_zero(),
            None
            if killed_f.is_zero()
            else f"nonzero through order {killed_f.order}",
        )
    )

    killed_g = apply_operator(rec.operator, LogSeries(G_spec, F_spec))
    checks.append(
        CheckResult(
            "annihilates-log-companion",
            killed_g.is_zero(),
            None
            if killed_g.is_zero()
            else f"nonzero through order {killed_g.order}",
        )
    )

    unit = (G_spec * F_spec.reciprocal()).exp()
    q = MSeries.variable(1, order, 0) * unit
    scan = integrality_scan(q)
    checks.append(
        CheckResult(
            "q-parameter-integral",
            scan.ok,
            None
            if scan.ok
            else f"denominator at order {scan.violations[0].exponent[0]}",
        )
    )
    return AnnihilationReport(rec.name, order, tuple(checks))


def case30_landau_check(
    strategy: Optional[SamplingStrategy] = None,
) -> CriterionVerdict:
    """Classify the case-30 form system (expected: the everywhere >= 1 branch)."""
    return classify(case30_system(), strategy)
