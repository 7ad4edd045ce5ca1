"""Gamma and zeta in double precision, checked against a few classical values."""
import cmath
import math

import mpmath

from moebius_tails import gamma, zeta, zeta_derivative, bundled_zero_table

# Gamma at half-integers is a multiple of sqrt(pi)
print("Gamma(1/2)^2 / pi =", (gamma(0.5) ** 2 / math.pi).real)
print("Gamma(-3/2)       =", gamma(-1.5).real, "expected", 4 * math.sqrt(math.pi) / 3)

# reflection keeps the left half plane accurate
z = -7.3 + 2.1j
print("Gamma(z) Gamma(1-z) sin(pi z) / pi =", gamma(z) * gamma(1 - z) * cmath.sin(math.pi * z) / math.pi)

# zeta on the real line, including the trivial zeros and zeta'(0) = -log(2 pi)/2
for s in (2, 4, 0, -1, -2):
    print(f"zeta({s:>2}) = {zeta(s).real:+.16f}")
print("zeta'(0) + log(2 pi)/2 =", zeta_derivative(0).real + 0.5 * math.log(2 * math.pi))

# the bundled ordinates really are zeros
table = bundled_zero_table()
for g in table.ordinates[:5]:
    print(f"|zeta(1/2 + {g:.6f} i)| = {abs(zeta(complex(0.5, g))):.2e}")

# when double precision is not enough, the same code runs in mpmath arithmetic
print("zeta(1/2 + 10i) at 40 digits:", mpmath.nstr(zeta(0.5 + 10j, dps=40), 40))
