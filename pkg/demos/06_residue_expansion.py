"""Large-x expansion from the poles of the Mellin-Barnes integrand.

Poles sit at z = s + n (from Gamma(s-z)) and at z = s - rho for each
nontrivial zero rho. The pole at z = s alone gives -2 x^-s because
zeta(0) = -1/2; the zero terms carry |Gamma(rho) Gamma(s-rho)|, which is
exponentially small in Im rho.
"""
from moebius_tails import SeriesParams, TruncationPlan, asymptotic_parts, moebius_tail, residue_term

s = 2.5
print(f"{'x':>8} {'direct':>14} {'expansion':>14} {'rel dev':>10} {'zero part':>12}")
for x in (1e2, 1e3, 1e4):
    d = moebius_tail(SeriesParams(s, x, TruncationPlan(1e-15))).value.real
    p = asymptotic_parts(s, x, n_max=1, zero_pairs=50)
    print(f"{x:8.0f} {d:14.6e} {p.total.real:14.6e} {abs(p.total.real - d) / abs(d):10.2e} "
          f"{p.zero_part.real:12.3e}")

# where zeta(-n) = 0 the pole is double and brings a log x
for z0 in (s, s + 1, s + 2):
    t = residue_term(s, z0)
    print(f"pole at z = {z0}: x^{t.exponent.real:+.1f} (A + B log x) with log degree {t.log_degree}")
