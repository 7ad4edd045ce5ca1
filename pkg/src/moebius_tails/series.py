"""Direct evaluation of the tail series.

* ``plain_tail``: sum_{n>=1} (x+n)^-s, head sum plus Euler-Maclaurin tail.
* ``alternating_partial_sum`` / ``alternating_tail``: sum (-1)^(n-1) u(x+n).
* ``moebius_tail``: sum mu(n) (x+n)^-s over sieved blocks, truncated at N with
  a Mertens-model error estimate.
* ``power_series_rhs``: sum_k (s)_k (-x)^k / (zeta(s+k) k!), 0 <= x < 1.
* ``bose_laplace_integral``: (1/Gamma(s)) int_0^inf t^(s-1) e^(-xt) / (e^t - 1) dt.

Sign convention for alternating sums: the first term is +u(x+1), so every
even partial sum is nonnegative and bounded by u(x+1).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import (
    CapacityError,
    ConvergenceError,
    DivergentSeriesError,
    DomainError,
    MonotonicityError,
    ToleranceUnreachableError,
)
from .moebius import DEFAULT_BLOCK_SIZE, DEFAULT_CAPACITY, MoebiusBlock, map_blocks
from .quadrature import adaptive_gauss_legendre
from .special import as_complex, hurwitz_tail, rgamma, zeta, _bernoulli_even

__all__ = [
    "Estimate",
    "TailEstimate",
    "TruncationPlan",
    "SeriesParams",
    "KernelSpec",
    "plain_tail",
    "watson_ratio",
    "alternating_partial_sum",
    "even_partial_sums",
    "alternating_tail",
    "moebius_tail",
    "moebius_tails",
    "power_series_rhs",
    "bose_laplace_integral",
    "DivergentSeriesError",
]

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Estimate:
    value: complex
    error: float

    def __post_init__(self):
        v = self.value
        object.__setattr__(self, "value", complex(v) if np.iscomplexobj(v) else float(v))
        object.__setattr__(self, "error", float(self.error))


@dataclass(frozen=True)
class TailEstimate(Estimate):
    cutoff: int = 0
    truncation_error: float = 0.0
    rounding_error: float = 0.0
    model: str = ""


@dataclass(frozen=True)
class TruncationPlan:
    """How an infinite Moebius tail is cut.

    The truncation error is modelled by partial summation against the
    Mertens function under the *empirical* hypothesis |M(t)| <= A t^theta
    for t >= N. That hypothesis is a heuristic, not a theorem, and every
    error report says so.

    ``cutoff=None`` means "smallest N meeting target_tolerance". A plan with
    an explicit cutoff and ``target_tolerance=inf`` just reports the bound.
    """

    target_tolerance: float = 1e-10
    cutoff: int | None = None
    mertens_coefficient: float = 0.6
    mertens_exponent: float = 0.6
    min_cutoff: int = 1000

    def __post_init__(self):
        if not self.target_tolerance > 0:
            raise DomainError("target_tolerance must be positive")
        if self.mertens_coefficient <= 0:
            raise DomainError("mertens_coefficient must be positive")
        if not 0.5 < self.mertens_exponent < 1.0:
            raise DomainError("mertens_exponent must lie in (1/2, 1)")
        if self.cutoff is not None and self.cutoff < 1:
            raise DomainError("cutoff must be a positive integer")

    @classmethod
    def fixed(cls, cutoff: int, **kw) -> "TruncationPlan":
        return cls(target_tolerance=math.inf, cutoff=int(cutoff), **kw)

    @property
    def model(self) -> str:
        return (f"heuristic Mertens model |M(t)| <= {self.mertens_coefficient:g} "
                f"t^{self.mertens_exponent:g}")

    def tail_bound(self, s, x: float, n: int) -> float:
        """Modelled bound on |sum_{k>n} mu(k) (k+x)^-s|.

        A n^theta (n+x)^-sigma (1 + |s| n / ((sigma-theta)(n+x))); reduces to the
        sigma-only form for real s.
        """
        s = as_complex(s)
        sigma = s.real
        theta = self.mertens_exponent
        if sigma <= theta:
            raise DomainError(f"Mertens model needs Re s > {theta}, got {sigma}")
        nx = n + x
        return (self.mertens_coefficient * n ** theta * nx ** (-sigma)
                * (1.0 + abs(s) * n / ((sigma - theta) * nx)))

    def resolve(self, s, x: float, capacity: int = DEFAULT_CAPACITY) -> int:
        """The cutoff N this plan uses at (s, x)."""
        if self.cutoff is not None:
            n = self.cutoff
            if n > capacity:
                raise CapacityError(f"cutoff {n} exceeds sieve capacity {capacity}")
            if self.tail_bound(s, x, n) > self.target_tolerance:
                raise ToleranceUnreachableError(
                    f"cutoff {n} gives modelled tail {self.tail_bound(s, x, n):.3g} "
                    f"> target {self.target_tolerance:.3g}"
                )
            return n
        tol = self.target_tolerance
        lo = self.min_cutoff
        if self.tail_bound(s, x, lo) <= tol:
            return lo
        hi = lo
        while self.tail_bound(s, x, hi) > tol:
            if hi >= capacity:
                raise ToleranceUnreachableError(
                    f"no cutoff <= {capacity} meets tolerance {tol:.3g} at s={s}, x={x} "
                    f"(best {self.tail_bound(s, x, capacity):.3g})"
                )
            lo, hi = hi, min(2 * hi, capacity)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.tail_bound(s, x, mid) <= tol:
                hi = mid
            else:
                lo = mid
        return hi


@dataclass(frozen=True)
class SeriesParams:
    s: complex
    x: float
    plan: TruncationPlan = field(default_factory=TruncationPlan)

    def __post_init__(self):
        object.__setattr__(self, "s", as_complex(self.s))
        x = float(self.x)
        if not (math.isfinite(x) and x >= 0):
            raise DomainError(f"x must be a finite nonnegative real, got {self.x!r}")
        object.__setattr__(self, "x", x)

    @property
    def sigma(self) -> float:
        return self.s.real

    @property
    def tau(self) -> float:
        return self.s.imag


@dataclass(frozen=True)
class KernelSpec:
    """u(t) = t^-s (pure_power) or t^-s (1 + a/t) (perturbed_power)."""

    variant: str
    s: complex
    amplitude: float = 0.0

    def __post_init__(self):
        if self.variant not in ("pure_power", "perturbed_power"):
            raise DomainError(f"unknown kernel variant {self.variant!r}")
        object.__setattr__(self, "s", as_complex(self.s))

    def components(self) -> list[tuple[float, complex]]:
        """(coefficient, exponent) pairs: u(t) = sum c t^-p."""
        if self.variant == "pure_power" or self.amplitude == 0.0:
            return [(1.0, self.s)]
        return [(1.0, self.s), (self.amplitude, self.s + 1.0)]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for c, p in self.components():
            out += c * np.exp(-p * np.log(t))
        return out if out.ndim else complex(out)

    def real_values(self, t) -> np.ndarray:
        if self.s.imag != 0.0:
            raise DomainError("alternating sums need a real-valued kernel (real s)")
        return np.real(self(np.asarray(t, dtype=float)))


# -- plain tails --------------------------------------------------------------

def plain_tail(params: SeriesParams) -> Estimate:
    """sum_{n>=1} (x+n)^-s: explicit head of N terms plus Euler-Maclaurin tail.

    Uses ``params.plan.cutoff`` as N when given, otherwise the smallest N from
    a doubling schedule whose remainder bound is below the plan tolerance.
    """
    s, x = params.s, params.x
    if s.real <= 1.0:
        raise DivergentSeriesError(f"sum (x+n)^-s diverges for Re s = {s.real} <= 1")
    tol = min(params.plan.target_tolerance, 1e-13)
    if params.plan.cutoff is not None:
        n = params.plan.cutoff
        tail, bound = hurwitz_tail(s, x + n + 1.0)
    else:
        n = 0
        tail, bound = hurwitz_tail(s, x + 1.0)
        while bound > tol * 1e-2:
            n = max(8, 2 * n)
            tail, bound = hurwitz_tail(s, x + n + 1.0)
    if n:
        logs = np.log(x + np.arange(1, n + 1, dtype=float))
        terms = np.exp(-s * logs)
        head = complex(math.fsum(terms.real), math.fsum(terms.imag))
        abs_sum = float(np.sum(np.abs(terms)))
    else:
        head, abs_sum = 0j, 0.0
    value = head + tail
    rounding = EPS * (4.0 * abs(value) + abs(s) * abs_sum * math.log(x + n + 2.0) + abs(tail))
    return Estimate(value, bound + rounding)


def watson_ratio(s, x: float) -> float:
    """plain_tail / (x^(1-s)/(s-1)); tends to 1 as x grows."""
    s = as_complex(s)
    est = plain_tail(SeriesParams(s, x))
    lead = cmath.exp((1.0 - s) * math.log(x)) / (s - 1.0)
    return est.value / lead


# -- alternating tails -----------------------------------------------------------

def _check_decreasing(kernel: KernelSpec, x: float, count: int) -> np.ndarray:
    vals = kernel.real_values(x + np.arange(1, count + 1, dtype=float))
    if np.any(vals <= 0):
        raise MonotonicityError(f"kernel not positive on [x+1, x+{count}] at x={x}")
    bad = np.nonzero(np.diff(vals) > 0)[0]
    if bad.size:
        k = int(bad[0]) + 1
        raise MonotonicityError(f"kernel increases between x+{k} and x+{k + 1} at x={x}")
    return vals


def alternating_partial_sum(kernel: KernelSpec, x: float, terms: int) -> float:
    """s_terms(x) = sum_{n=1}^{terms} (-1)^(n-1) u(x+n) for even ``terms``."""
    if terms <= 0 or terms % 2:
        raise DomainError(f"terms must be an even positive integer, got {terms}")
    vals = _check_decreasing(kernel, x, terms)
    return math.fsum(vals[0::2] - vals[1::2])


def even_partial_sums(kernel: KernelSpec, x: float, pairs: int) -> np.ndarray:
    """[s_2(x), s_4(x), ..., s_{2 pairs}(x)]: cumulative sums of nonnegative pair gaps."""
    vals = _check_decreasing(kernel, x, 2 * pairs)
    return np.cumsum(vals[0::2] - vals[1::2])


def alternating_tail(kernel: KernelSpec, x: float, order: int = 40) -> Estimate:
    """Limit of the even partial sums, by Cohen-Rodriguez Villegas-Zagier acceleration.

    Writing a_k = u(x+1+k) as moments of a measure on [0, 1] (possible for
    every power kernel), the order-n estimate is within
    2 * (total variation of the measure) / (3 + sqrt 8)^n of the limit; the
    variation is at most sum |c| (x+1)^-p over the kernel's components.
    """
    if order < 1:
        raise DomainError("order must be positive")
    vals = _check_decreasing(kernel, x, order + 1)
    d = (3.0 + math.sqrt(8.0)) ** order
    d = 0.5 * (d + 1.0 / d)
    b = -1.0
    c = -d
    acc = 0.0
    weights_abs = 0.0
    for k in range(order):
        c = b - c
        acc += c * vals[k]
        weights_abs += abs(c * vals[k])
        b = (k + order) * (k - order) * b / ((k + 0.5) * (k + 1.0))
    value = acc / d
    variation = sum(abs(cf) * (x + 1.0) ** (-p.real) for cf, p in kernel.components())
    truncation = 2.0 * variation / (3.0 + math.sqrt(8.0)) ** order
    rounding = 4.0 * EPS * weights_abs / d
    return Estimate(value, truncation + rounding)


# -- Moebius tails -----------------------------------------------------------------

def _stream_moebius_sums(s: complex, xs: np.ndarray, cutoffs: np.ndarray, *,
                         workers, block_size, capacity):
    top = int(cutoffs.max())
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    cutoffs = np.ascontiguousarray(cutoffs, dtype=np.int64)
    sigma, tau = s.real, s.imag

    def reduce_block(block: MoebiusBlock):
        return _kernels.block_tail_sums(block.start, block.values, xs, cutoffs, sigma, tau)

    parts = map_blocks(reduce_block, top, block_size=block_size, workers=workers, capacity=capacity)
    stacked = np.stack(parts)  # (blocks, nx, 5), ascending block order
    out = []
    for i in range(len(xs)):
        re = math.fsum(np.concatenate([stacked[:, i, 0], stacked[:, i, 1]]))
        im = math.fsum(np.concatenate([stacked[:, i, 2], stacked[:, i, 3]]))
        out.append((complex(re, im), float(np.sum(stacked[:, i, 4]))))
    return out


def moebius_tails(s, xs: Sequence[float], plan: TruncationPlan | None = None, *,
                  workers: int | None = None, block_size: int = DEFAULT_BLOCK_SIZE,
                  capacity: int = DEFAULT_CAPACITY) -> list[TailEstimate]:
    """moebius_tail at many x from a single streamed pass over the sieve."""
    s = as_complex(s)
    plan = plan or TruncationPlan()
    if s.real <= 1.0:
        raise DivergentSeriesError(f"Moebius tail needs Re s > 1, got {s.real}")
    params = [SeriesParams(s, x, plan) for x in xs]
    cutoffs = np.array([plan.resolve(s, p.x, capacity) for p in params], dtype=np.int64)
    sums = _stream_moebius_sums(s, np.array([p.x for p in params]), cutoffs,
                                workers=workers, block_size=block_size, capacity=capacity)
    out = []
    for p, n, (value, abs_sum) in zip(params, cutoffs, sums):
        n = int(n)
        trunc = plan.tail_bound(s, p.x, n)
        # Neumaier sum plus per-term log/exp error amplified by |s| log(n+x)
        amp = 4.0 + abs(s) * math.log(n + p.x + 1.0)
        rounding = 2.0 * EPS * abs(value) + amp * EPS * abs_sum + n * EPS ** 2 * abs_sum
        out.append(TailEstimate(value, trunc + rounding, cutoff=n, truncation_error=trunc,
                                rounding_error=rounding, model=plan.model))
    return out


def moebius_tail(params: SeriesParams, *, workers: int | None = None,
                 block_size: int = DEFAULT_BLOCK_SIZE,
                 capacity: int = DEFAULT_CAPACITY) -> TailEstimate:
    """sum_{n<=N} mu(n) (x+n)^-s with compensated summation over sieved blocks.

    The result is bitwise identical for any ``workers`` at fixed block size.
    """
    return moebius_tails(params.s, [params.x], params.plan, workers=workers,
                         block_size=block_size, capacity=capacity)[0]


# -- power series ---------------------------------------------------------------

def power_series_terms(s, x: float, *, stop: float = 1e-16, max_terms: int = 100_000):
    """Terms (s)_k (-x)^k / (zeta(s+k) k!) until three in a row fall below ``stop``."""
    s = as_complex(s)
    x = float(x)
    if not 0.0 <= x < 1.0:
        raise DomainError(f"power series needs 0 <= x < 1, got {x}")
    if s.real <= 1.0:
        raise DivergentSeriesError(f"power series needs Re s > 1, got {s.real}")
    terms = []
    coeff = 1.0 + 0j  # (s)_k (-x)^k / k!
    small = 0
    k = 0
    while small < 3:
        if k >= max_terms:
            raise ConvergenceError(f"power series did not settle within {max_terms} terms")
        term = coeff / zeta(s + k)
        terms.append(term)
        small = small + 1 if abs(term) < stop else 0
        coeff *= (s + k) * (-x) / (k + 1)
        k += 1
        if x == 0.0:
            break
    return terms


def power_series_rhs(s, x: float) -> complex:
    """sum_k (s)_k (-x)^k / (zeta(s+k) k!) for 0 <= x < 1, Re s > 1."""
    terms = power_series_terms(s, x)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


# -- Laplace integral -------------------------------------------------------------

def _bernoulli_all(n: int) -> list[Fraction]:
    # B_0..B_n with B_1 = -1/2
    even = _bernoulli_even(n // 2 + 1)
    out = []
    for i in range(n + 1):
        if i == 1:
            out.append(Fraction(-1, 2))
        elif i % 2:
            out.append(Fraction(0))
        else:
            out.append(even[i // 2])
    return out


def _near_zero_piece(s: complex, x: float, t0: float, terms: int = 30) -> complex:
    # int_0^t0 t^(s-2) h(t) dt with h(t) = t e^{-xt}/(e^t - 1) = sum_j c_j t^j
    b = [float(v) for v in _bernoulli_all(terms)]
    fact = [float(math.factorial(i)) for i in range(terms + 1)]
    total = 0j
    for j in range(terms + 1):
        c = sum(b[i] / fact[i] * (-x) ** (j - i) / fact[j - i] for i in range(j + 1))
        total += c * cmath.exp((s - 1.0 + j) * math.log(t0)) / (s - 1.0 + j)
    return total


def bose_laplace_integral(s, x: float, tol: float = 1e-12) -> Estimate:
    """(1/Gamma(s)) int_0^inf t^(s-1) e^(-xt) / (e^t - 1) dt for Re s > 1, x >= 0.

    [0, t0] uses the small-t expansion t^(s-2) * t/(e^t-1) * e^(-xt) integrated
    termwise; [t0, T] is integrated in v = log t by adaptive Gauss-Legendre;
    beyond T the integrand is below tolerance and the tail is bounded.
    """
    s = as_complex(s)
    x = float(x)
    if s.real <= 1.0:
        raise DivergentSeriesError(f"Laplace integral diverges at 0 for Re s = {s.real} <= 1")
    if x < 0:
        raise DomainError("x must be nonnegative")
    sigma = s.real
    t0 = min(0.1, 0.1 / (1.0 + x))
    near = _near_zero_piece(s, x, t0)

    def envelope(t):
        return t ** (sigma - 1.0) * math.exp(-(x + 1.0) * t) / (-math.expm1(-t))

    t_max = max(2.0 * t0, 40.0 / (x + 1.0))
    while envelope(t_max) * t_max > tol * 1e-3:
        t_max *= 1.5
    rate = (x + 1.0) - max(0.0, sigma - 1.0) / t_max
    far_bound = envelope(t_max) / rate

    def f(v):
        t = np.exp(v)
        return np.exp(s * v - x * t) / np.expm1(t)

    res = adaptive_gauss_legendre(f, math.log(t0), math.log(t_max), tol * 1e-2,
                                  initial_panels=max(4, int(math.log(t_max / t0))))
    scale = rgamma(s)
    value = (near + res.value) * scale
    error = (res.error + far_bound + EPS * (abs(near) + abs(res.value)) * 10) * abs(scale)
    return Estimate(value, error)
