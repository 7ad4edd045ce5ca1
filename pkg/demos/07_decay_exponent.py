"""Envelope fit of the direct tail's decay, and what it can and cannot say.

A small cutoff keeps this quick; the CLI's ``fit`` subcommand does the
full-size version.
"""
from moebius_tails import TruncationPlan, conjecture_report, log_grid

for s in (1.5, 2.5):
    rep = conjecture_report(s, log_grid(1e1, 1e5, 17), plan=TruncationPlan.fixed(10 ** 7))
    half = rep.fit.slope_halfwidth if rep.fit else float("nan")
    print(f"s = {s}: fitted slope {rep.fitted_slope:.3f} +- {half:.3f}, "
          f"1/2 - sigma = {rep.conjectured_slope}, verdict {rep.verdict}, "
          f"exponent match {rep.exponent_match}")
    for note in rep.notes:
        print("   note:", note)

# The fitted slope sits near -sigma, not 1/2 - sigma: at reachable x the tail
# is dominated by the pole at z = s (-2 x^-s), and the zero terms, which would
# set the 1/2 - sigma rate, are suppressed by roughly exp(-pi * 14.13).
