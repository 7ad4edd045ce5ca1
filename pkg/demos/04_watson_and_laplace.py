"""Plain tails sum (x+n)^-s: large-x behaviour and the Laplace-integral form."""
from moebius_tails import SeriesParams, bose_laplace_integral, plain_tail, watson_ratio

s = 2.0
print("ratio of the tail to its leading term x^(1-s)/(s-1):")
for x in (1e1, 1e2, 1e3, 1e4, 1e5):
    r = watson_ratio(s, x)
    # next term of the expansion is -(s-1)/(2x) relative
    print(f"  x = {x:8.0f}  ratio = {r.real:.12f}  1 - 1/(2x) = {1 - 1 / (2 * x):.12f}")

print("\nsame tails from the Laplace integral of t^(s-1) e^(-xt)/(e^t - 1):")
for s, x in ((3.0, 10.0), (1.5, 0.0), (2 + 1j, 2.5)):
    a = plain_tail(SeriesParams(s, x))
    b = bose_laplace_integral(s, x)
    print(f"  s = {s}, x = {x}: {a.value:.15g} vs {b.value:.15g}  (diff {abs(a.value - b.value):.1e})")
