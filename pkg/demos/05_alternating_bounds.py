"""Alternating tails sum (-1)^(n-1) u(x+n) for decreasing u.

Even partial sums climb monotonically to the limit, and the limit never
exceeds u(x).
"""
import math

import numpy as np

from moebius_tails import KernelSpec, alternating_tail, even_partial_sums

for sigma in (0.5, 1.5):
    u = KernelSpec("pure_power", sigma)
    for x in (1.0, 10.0, 100.0):
        sums = even_partial_sums(u, x, 5000)
        lim = alternating_tail(u, x)
        print(f"sigma={sigma} x={x:5.0f}: s_2={sums[0]:.6f} s_10000={sums[-1]:.10f} "
              f"limit={lim.value:.12f} (+-{lim.error:.0e})  u(x)={x ** -sigma:.6f}  "
              f"monotone={bool(np.all(np.diff(sums) >= 0))}")

# closed form: 1/2 - 1/3 + 1/4 - ... = 1 - ln 2
lim = alternating_tail(KernelSpec("pure_power", 1.0), 1.0)
print("\nu = 1/t, x = 1:", lim.value, "vs 1 - ln 2 =", 1 - math.log(2))

# a perturbed kernel t^-s (1 + a/t) is still fine while it stays decreasing
u = KernelSpec("perturbed_power", 1.5, amplitude=0.4)
print("perturbed kernel, x = 3:", alternating_tail(u, 3.0).value)
