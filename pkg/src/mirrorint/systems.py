"""Bundled example systems.

Five systems exercise every part of the toolkit out of the box:

  * ``cubic-2d``: coefficients (3m+3n)!/(m!^3 n!^3); the everywhere >= 1
    branch of the dichotomy, all maps integral.
  * ``cubic-split``: (3a)!/((2a)! a!) padded to two variables; the Landau
    function has a zero on the jump region at (1/2, 0), the second
    canonical coordinate degenerates to z_2.
  * ``central-binomial``: one variable, coefficients C(2n, n).
  * ``inverse-binomial``: raw system with coefficients 1/C(2n, n); its
    Landau function reaches -1, giving negative-valuation witnesses.
  * ``case30``: the two-variable system behind catalog case 30.
"""

from __future__ import annotations

from .forms import FormSystem

CUBIC_2D = FormSystem(
    e=[(3, 3)],
    f=[(1, 0), (1, 0), (1, 0), (0, 1), (0, 1), (0, 1)],
)

CUBIC_SPLIT = FormSystem(e=[(3, 0)], f=[(2, 0), (1, 0)])

CENTRAL_BINOMIAL = FormSystem(e=[(2,)], f=[(1,), (1,)])

INVERSE_BINOMIAL = FormSystem(e=[(1,), (1,)], f=[(2,)], raw=True)

CASE30 = FormSystem(
    e=[(4, 4), (2, 0), (2, 0), (0, 2)],
    f=[(2, 2), (1, 1), (1, 1), (1, 0), (1, 0), (1, 0), (1, 0), (0, 1), (0, 1)],
)

BUNDLED: dict[str, FormSystem] = {
    "cubic-2d": CUBIC_2D,
    "cubic-split": CUBIC_SPLIT,
    "central-binomial": CENTRAL_BINOMIAL,
    "inverse-binomial": INVERSE_BINOMIAL,
    "case30": CASE30,
}


def default_order(sys: FormSystem) -> int:
    """Default truncation order for scans: 12 in one variable, 8 otherwise."""
    return 12 if sys.d == 1 else 8
