import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from moebius_tails import errors
from moebius_tails.series import (KernelSpec, SeriesParams, TruncationPlan, alternating_partial_sum,
                                  alternating_tail, bose_laplace_integral, even_partial_sums,
                                  moebius_tail, moebius_tails, plain_tail, power_series_rhs,
                                  watson_ratio)

from .oracles import mu_trial_division

finite = dict(allow_nan=False, allow_infinity=False)


# -- plain tails -------------------------------------------------------------

@pytest.mark.parametrize("s,x", [(2, 0), (2, 10), (1.5, 3.7), (3 + 2j, 0.25), (1.2 - 5j, 100)])
def test_plain_tail_vs_hurwitz(s, x):
    est = plain_tail(SeriesParams(s, x))
    ref = complex(mpmath.zeta(s, x + 1))
    assert abs(est.value - ref) <= est.error + 1e-15 * abs(ref)
    assert est.error < 1e-12 * max(1, abs(ref))


def test_plain_tail_fixed_cutoff_agrees():
    a = plain_tail(SeriesParams(2.5, 4.0))
    b = plain_tail(SeriesParams(2.5, 4.0, TruncationPlan.fixed(500)))
    assert abs(a.value - b.value) <= a.error + b.error


def test_plain_tail_diverges():
    with pytest.raises(errors.DivergentSeriesError):
        plain_tail(SeriesParams(1.0, 1.0))
    with pytest.raises(errors.DomainError):
        SeriesParams(2, -1)


def test_watson_ratio_tends_to_one():
    devs = [abs(watson_ratio(2, x) - 1) for x in (10.0, 100.0, 1000.0)]
    assert devs[0] > devs[1] > devs[2]
    # first correction is -(s/2)/x... leading two terms of the expansion
    assert abs(watson_ratio(2, 1e4) - (1 - 1 / 2e4)) < 1e-8


# -- Laplace integral ----------------------------------------------------------

@pytest.mark.parametrize("s,x", [(3, 10), (1.5, 0), (2 + 1j, 2.5), (4.5, 300)])
def test_bose_integral_matches_plain(s, x):
    b = bose_laplace_integral(s, x)
    p = plain_tail(SeriesParams(s, x))
    assert abs(b.value - p.value) <= 1e-9 * max(1, abs(p.value))
    assert abs(b.value - p.value) <= b.error + p.error + 1e-15


# -- alternating tails -----------------------------------------------------------

@given(st.floats(0.3, 3.0, **finite), st.floats(0.0, 200.0, **finite))
def test_even_partial_sums_monotone_and_bounded(sigma, x):
    u = KernelSpec("pure_power", sigma)
    sums = even_partial_sums(u, x, 200)
    assert np.all(np.diff(sums) >= 0)
    lim = alternating_tail(u, x)
    assert sums[-1] <= lim.value + lim.error
    assert lim.value <= u(x + 1).real  # alternating sum starting at u(x+1)


def test_alternating_closed_form():
    u = KernelSpec("pure_power", 1.0)
    est = alternating_tail(u, 0.0)
    # sum_{n>=1} (-1)^(n-1)/n = ln 2
    assert abs(est.value - math.log(2)) < 1e-14
    assert est.error < 1e-12
    assert abs(alternating_partial_sum(u, 0.0, 10 ** 6) - math.log(2)) < 1e-6


def test_alternating_matches_mpmath():
    for s, x in [(0.5, 1.0), (1.5, 10.0), (2.0, 100.0)]:
        est = alternating_tail(KernelSpec("pure_power", s), x)
        ref = float(mpmath.nsum(lambda n: (-1) ** (n - 1) * (x + n) ** -s, [1, mpmath.inf]))
        assert abs(est.value - ref) <= est.error + 1e-15


def test_perturbed_kernel_and_guards():
    u = KernelSpec("perturbed_power", 1.5, amplitude=0.3)
    assert abs(u(2.0) - 2 ** -1.5 * 1.15) < 1e-15
    est = alternating_tail(u, 3.0)
    ref = float(mpmath.nsum(lambda n: (-1) ** (n - 1) * u(3.0 + float(n)).real, [1, mpmath.inf]))
    assert abs(est.value - ref) < 1e-12
    with pytest.raises(errors.MonotonicityError):
        even_partial_sums(KernelSpec("perturbed_power", 1.0, amplitude=-3.0), 0.0, 10)
    with pytest.raises(errors.DomainError):
        alternating_partial_sum(u, 0.0, 3)
    with pytest.raises(errors.DomainError):
        KernelSpec("exotic", 1.0)


# -- Moebius tails -----------------------------------------------------------------

def test_moebius_tail_brute_force_small_cutoff():
    n = 5000
    mu = mu_trial_division(np.arange(1, n + 1))
    for s, x in [(2.0, 0.0), (3 + 1j, 7.5)]:
        ref = mpmath.fsum(int(m) * mpmath.power(x + k, -s) for k, m in enumerate(mu, 1) if m)
        est = moebius_tail(SeriesParams(s, x, TruncationPlan.fixed(n)))
        assert abs(est.value - complex(ref)) < 1e-15
        assert est.cutoff == n


def test_moebius_tail_inverse_zeta():
    est = moebius_tail(SeriesParams(2.0, 0.0, TruncationPlan(1e-9)))
    assert abs(est.value - 6 / math.pi ** 2) <= 1e-8
    assert abs(est.value - 6 / math.pi ** 2) <= est.error
    assert "heuristic" in est.model


def test_moebius_tails_worker_invariance():
    xs = [0.0, 1.0, 10.0]
    plan = TruncationPlan.fixed(300_000)
    a = moebius_tails(2.5, xs, plan, workers=1, block_size=10_000)
    b = moebius_tails(2.5, xs, plan, workers=4, block_size=10_000)
    assert [e.value for e in a] == [e.value for e in b]


def test_truncation_plan():
    plan = TruncationPlan(1e-8)
    n = plan.resolve(2.0, 0.0)
    assert plan.tail_bound(2.0, 0.0, n) <= 1e-8 < plan.tail_bound(2.0, 0.0, n - 1)
    with pytest.raises(errors.ToleranceUnreachableError):
        TruncationPlan(1e-30).resolve(1.1, 0.0, capacity=10 ** 6)
    with pytest.raises(errors.CapacityError):
        TruncationPlan.fixed(10 ** 7).resolve(2.0, 0.0, capacity=10 ** 6)
    with pytest.raises(errors.DomainError):
        TruncationPlan(mertens_exponent=0.4)
    with pytest.raises(errors.DivergentSeriesError):
        moebius_tail(SeriesParams(1.0, 0.0))


# -- power series ------------------------------------------------------------------

def test_power_series_vs_mpmath():
    s, x = 2.5, 0.5
    ref = mpmath.nsum(lambda k: mpmath.rf(s, k) * (-x) ** k / (mpmath.zeta(s + k) * mpmath.factorial(k)),
                      [0, mpmath.inf])
    assert abs(power_series_rhs(s, x) - complex(ref)) < 1e-14


def test_power_series_domain():
    with pytest.raises(errors.DomainError):
        power_series_rhs(2.5, 1.0)
