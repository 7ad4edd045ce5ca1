"""One Moebius tail computed three independent ways.

sum_{n>=1} mu(n) (n+x)^-s by direct sieving, by the power series in x
(only for x < 1), and by a vertical-line Mellin-Barnes integral.
"""
from moebius_tails import SeriesParams, TruncationPlan, inverse_mellin, moebius_tail, power_series_rhs

s = 2.5
plan = TruncationPlan(1e-12)
print(f"{'x':>6} {'direct':>22} {'power series':>22} {'Mellin-Barnes':>22}")
for x in (0.0, 0.25, 0.5, 0.9, 2.0, 10.0):
    d = moebius_tail(SeriesParams(s, x, plan))
    p = power_series_rhs(s, x) if x < 1 else float("nan")
    m = inverse_mellin(s, x).value.real if x > 0 else float("nan")
    print(f"{x:6.2f} {d.value.real:22.16e} {p.real:22.16e} {m:22.16e}")

# the direct error budget is split into a modelled truncation part and rounding
d = moebius_tail(SeriesParams(s, 0.5, plan))
print(f"\ncutoff N = {d.cutoff}, truncation {d.truncation_error:.2e}, rounding {d.rounding_error:.2e}")
print("model:", d.model)

# complex exponents work the same way
s = 3 + 1j
print("\ns = 3+i, x = 2:", moebius_tail(SeriesParams(s, 2.0, plan)).value, inverse_mellin(s, 2.0).value)
