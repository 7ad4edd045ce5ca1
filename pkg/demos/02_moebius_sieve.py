"""Segmented Moebius sieve and Mertens checkpoints."""
import time

import numpy as np

from moebius_tails import mertens_checkpoints, sieve_block

block = sieve_block(1, 20)
print("mu(1..20):", block.values.tolist())

# a block far out: the sieve only needs primes up to sqrt of the block end
far = sieve_block(10 ** 9, 30)
print("mu(1e9 .. 1e9+29):", far.values.tolist())
print("squarefree density there:", np.count_nonzero(far.values) / len(far), "vs 6/pi^2 = 0.6079")

# one streamed pass gives every checkpoint
t = time.perf_counter()
for cp in mertens_checkpoints([10, 100, 10 ** 4, 10 ** 6, 10 ** 7]):
    print(f"M({cp.n:>8}) = {cp.value:>6}   |M(n)|/sqrt(n) = {abs(cp.value) / cp.n ** 0.5:.3f}")
print(f"({time.perf_counter() - t:.2f} s)")
