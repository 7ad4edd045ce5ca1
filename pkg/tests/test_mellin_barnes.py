import mpmath
import pytest

from moebius_tails import errors
from moebius_tails.mellin_barnes import ContourSpec, integrand, inverse_mellin
from moebius_tails.series import SeriesParams, TruncationPlan, moebius_tail


def test_integrand_vs_mpmath():
    z, s, x = 0.3 + 7j, 2.5 + 1j, 3.0
    ref = (mpmath.gamma(z) * mpmath.gamma(s - z) / (mpmath.gamma(s) * mpmath.zeta(s - z))
           * mpmath.power(x, -z))
    assert abs(integrand(z, s, x) - complex(ref)) < 1e-12 * abs(complex(ref))


def test_integrand_pole_guard():
    with pytest.raises(errors.PoleProximityError):
        integrand(1e-10, 2.5, 1.0)
    with pytest.raises(errors.PoleProximityError):
        integrand(2.5 + 1e-12, 2.5, 1.0)


@pytest.mark.parametrize("s,x", [(2.5, 0.5), (3.0, 10.0), (3 + 1j, 2.0)])
def test_inverse_mellin_matches_direct(s, x):
    m = inverse_mellin(s, x)
    d = moebius_tail(SeriesParams(s, x, TruncationPlan(1e-11)))
    assert abs(m.value - d.value) <= m.error + d.error + 1e-12
    assert m.error < 1e-10


def test_contour_independence():
    a = inverse_mellin(3.0, 2.0, ContourSpec(0.3, 40.0))
    b = inverse_mellin(3.0, 2.0, ContourSpec(1.6, 40.0))
    assert abs(a.value - b.value) < 1e-10


def test_contour_outside_strip():
    with pytest.raises(errors.DomainError):
        inverse_mellin(2.5, 1.0, ContourSpec(1.6, 30.0))
    with pytest.raises(errors.DomainError):
        inverse_mellin(1.0, 1.0)
    with pytest.raises(errors.DomainError):
        ContourSpec(0.2, -1.0)


def test_truncation_error_reported():
    short = inverse_mellin(2.5, 1.0, ContourSpec(0.5, 3.0))
    assert short.truncation_error > 1e-6
    assert short.error >= short.truncation_error
