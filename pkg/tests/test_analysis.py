import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from moebius_tails import errors
from moebius_tails.analysis import (FitResult, SampleSeries, conjecture_report, fit_decay_exponent,
                                    judge, log_grid, sample_plain_tails)
from moebius_tails.series import TruncationPlan


def series(xs, ys, s=None):
    return SampleSeries(xs, np.asarray(ys, dtype=complex), np.full(len(xs), 1e-300), s)


def test_exact_power_laws():
    xs = log_grid(1e2, 1e6, 17)
    f = fit_decay_exponent(series(xs, xs ** -1.0))
    assert abs(f.slope + 1) < 1e-12 and f.residual_rms < 1e-12
    f = fit_decay_exponent(series(xs, 3 * xs ** -2.0, s=2.0))
    assert abs(f.slope + 2) < 1e-12 and abs(f.intercept - math.log(3)) < 1e-10
    assert abs(f.sigma_m_estimate) < 1e-12


@given(st.floats(-3, 1, allow_nan=False), st.integers(0, 2 ** 32 - 1))
def test_oscillating_envelope_recovered(alpha, seed):
    rng = np.random.default_rng(seed)
    xs = np.sort(10 ** rng.uniform(2, 8, 200))  # irregular, so no aliasing with the phase
    ys = xs ** alpha * np.cos(14.13 * np.log(xs) + rng.uniform(0, 6.3)) * (1 + 0.05 * rng.standard_normal(xs.size))
    f = fit_decay_exponent(series(xs, ys))
    assert abs(f.slope - alpha) < 0.15


def test_noise_points_dropped():
    xs = log_grid(1e2, 1e5, 13)
    vals = xs ** -1.0
    errs = np.where(xs > 1e4, 1.0, 1e-20)
    s = SampleSeries(xs, vals.astype(complex), errs)
    assert s.admitted.sum() == 9
    f = fit_decay_exponent(s)
    assert max(f.x_used) <= 1e4


def test_insufficient_span():
    xs = log_grid(1e2, 1e3, 9)
    with pytest.raises(errors.InsufficientSpanError):
        fit_decay_exponent(series(xs, xs ** -1.0))
    with pytest.raises(errors.DegenerateFitError):
        fit_decay_exponent(SampleSeries(xs, np.zeros(9, dtype=complex), np.ones(9)))


def test_sample_validation():
    with pytest.raises(errors.DomainError):
        SampleSeries([1.0, 1.0], [1, 1], [1, 1])
    with pytest.raises(errors.DomainError):
        SampleSeries([1.0, 2.0], [1, 1], [1, 0])


def test_judge():
    fit = FitResult(slope=-1.5, intercept=0, residual_rms=0, slope_halfwidth=0.01,
                    sigma_m_estimate=0.0)
    assert judge(fit, 1.5) == ("consistent", False)
    fit = FitResult(-1.02, 0, 0, 0.01, 0.48)
    assert judge(fit, 1.5) == ("consistent", True)
    fit = FitResult(-0.5, 0, 0, 0.01, 1.0)
    assert judge(fit, 1.5) == ("inconsistent", False)
    assert judge(fit, 1.5, epsilon=0.6)[0] == "consistent"
    assert judge(None, 1.5) == ("inconclusive", False)
    assert judge(FitResult(-1, 0, 0, 0.9, 0.5), 1.5)[0] == "inconclusive"


def test_plain_tail_slopes():
    for sigma in (1.5, 2.0, 3.0):
        f = fit_decay_exponent(sample_plain_tails(sigma, log_grid(1e2, 1e5, 13)))
        assert abs(f.slope - (1 - sigma)) < 5e-3


def test_conjecture_report_small_run():
    rep = conjecture_report(3.0, log_grid(1e2, 1e4, 9), plan=TruncationPlan.fixed(10 ** 6))
    assert rep.fit is not None
    # the direct tail is dominated by -2 x^-s, far below x^(1/2 - s)
    assert abs(rep.fitted_slope + 3.0) < 0.2
    assert rep.verdict == "consistent" and not rep.exponent_match
    with pytest.raises(errors.DomainError):
        conjecture_report(1.0, log_grid(1e2, 1e4, 5))
    with pytest.raises(errors.InsufficientSpanError):
        conjecture_report(2.0, [10.0, 20.0])
