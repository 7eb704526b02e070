#!/usr/bin/env python3
# Walkthrough: exact truncated power series in several variables.
#
# Everything is a sparse map from exponent vectors to rationals, truncated
# by total degree.  No floating point anywhere: exp, log, reciprocal and
# compositional inversion are graded recursions over Fractions.

import math
from fractions import Fraction

from mirrorint import MSeries, compose, invert_diagonal

N = 8
z = MSeries.variable(1, N, 0)

print("=== exp/log as exact inverse pairs ===")
e = z.exp()
print("exp(z) =", " + ".join(f"({c})z^{v[0]}" for v, c in e.items()))
print("log(exp(z)) == z:", e.log() == z)

print()
print("=== reciprocal of a unit ===")
u = MSeries.one(1, N) + z + 3 * z * z
print("u * u^-1 == 1:", u * u.reciprocal() == MSeries.one(1, N))

print()
print("=== compositional inversion of z * exp(z) ===")
inverse = invert_diagonal([z * z.exp()])[0]
print("z(q) =", " + ".join(f"({c})q^{v[0]}" for v, c in inverse.items()))
print("matches the Lagrange coefficients (-n)^(n-1)/n!:",
      all(inverse.coeff((n,)) == Fraction((-n) ** (n - 1), math.factorial(n))
          for n in range(1, N + 1)))

print()
print("=== a two-variable triangular map and its inverse ===")
M = 5
z1, z2 = (MSeries.variable(2, M, k) for k in range(2))
q = [z1, z2 * (MSeries.one(2, M) + z1)]
inv = invert_diagonal(q)
print("z2(q) =", " + ".join(f"({c})q1^{v[0]}q2^{v[1]}" for v, c in inv[1].items()))
print("round trip q(z(q)) == q:",
      all(compose(q[k], inv) == MSeries.variable(2, M, k) for k in range(2)))
