"""Independent reference implementations used only by the tests."""
import math

import numpy as np


def small_primes(limit):
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def mu_trial_division(ns):
    """mu(n) for an array of n by dividing out every prime up to sqrt(max n)."""
    rest = np.array(ns, dtype=np.int64)
    sign = np.ones(rest.shape, dtype=np.int64)
    for p in small_primes(math.isqrt(int(rest.max())) + 1):
        hit = rest % p == 0
        if not hit.any():
            continue
        rest[hit] //= p
        sign[hit] = -sign[hit]
        sq = hit & (rest % p == 0)
        sign[sq] = 0
    sign[rest > 1] *= -1
    return sign


def mertens_brute(n):
    return int(mu_trial_division(np.arange(1, n + 1)).sum())
