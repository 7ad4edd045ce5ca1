"""Compiled inner loops: block sieving and compensated block sums.

All kernels release the GIL so blocks can be processed from a thread pool.
"""
import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def base_primes(limit):
    """Primes p <= limit (plain Eratosthenes)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=np.bool_)
    flags[0] = False
    flags[1] = False
    p = 2
    while p * p <= limit:
        if flags[p]:
            for m in range(p * p, limit + 1, p):
                flags[m] = False
        p += 1
    return np.nonzero(flags)[0].astype(np.int64)


@njit(cache=True, nogil=True)
def sieve_mu(start, length, primes):
    """mu(n) for start <= n < start+length.

    ``primes`` must contain every prime <= sqrt(start+length-1).
    """
    end = start + length  # exclusive
    mu = np.ones(length, dtype=np.int8)
    prod = np.ones(length, dtype=np.int64)
    for i in range(primes.shape[0]):
        p = primes[i]
        if p * p >= end:
            break
        first = ((start + p - 1) // p) * p
        for m in range(first, end, p):
            j = m - start
            mu[j] = -mu[j]
            prod[j] *= p
        p2 = p * p
        first = ((start + p2 - 1) // p2) * p2
        for m in range(first, end, p2):
            mu[m - start] = 0
    # any cofactor left over is a single prime > sqrt(end)
    for j in range(length):
        if mu[j] != 0 and prod[j] != start + j:
            mu[j] = -mu[j]
    return mu


@njit(cache=True, nogil=True)
def block_sum_int(mu):
    acc = 0
    for j in range(mu.shape[0]):
        acc += mu[j]
    return acc


@njit(cache=True, nogil=True)
def block_tail_sums(start, mu, xs, cutoffs, sigma, tau):
    """Compensated sums of mu(n) (n + x)^(-sigma - i tau) over one block.

    One row per x, columns: re_hi, re_lo, im_hi, im_lo, sum |term|.
    Terms with n > cutoffs[i] are skipped.
    """
    nx = xs.shape[0]
    out = np.zeros((nx, 5))
    length = mu.shape[0]
    for i in range(nx):
        x = xs[i]
        stop = cutoffs[i] - start + 1
        if stop > length:
            stop = length
        sre = 0.0
        cre = 0.0
        sim = 0.0
        cim = 0.0
        sabs = 0.0
        for j in range(stop):
            m = mu[j]
            if m == 0:
                continue
            lg = math.log(start + j + x)
            mag = math.exp(-sigma * lg)
            sabs += mag
            if m < 0:
                mag = -mag
            if tau == 0.0:
                tr = mag
                ti = 0.0
            else:
                tr = mag * math.cos(tau * lg)
                ti = -mag * math.sin(tau * lg)
            # Neumaier compensated update
            t = sre + tr
            if abs(sre) >= abs(tr):
                cre += (sre - t) + tr
            else:
                cre += (tr - t) + sre
            sre = t
            if ti != 0.0:
                t = sim + ti
                if abs(sim) >= abs(ti):
                    cim += (sim - t) + ti
                else:
                    cim += (ti - t) + sim
                sim = t
        out[i, 0] = sre
        out[i, 1] = cre
        out[i, 2] = sim
        out[i, 3] = cim
        out[i, 4] = sabs
    return out
