import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from moebius_tails import errors
from moebius_tails.special import (gamma, hurwitz_tail, loggamma, pochhammer, rgamma, zeta,
                                   zeta_derivative)


def rel(a, b):
    return abs(complex(a) - complex(b)) / max(abs(complex(b)), 1e-300)


finite = dict(allow_nan=False, allow_infinity=False)
re_part = st.floats(-30, 30, **finite)
im_part = st.floats(-30, 30, **finite)


@pytest.mark.parametrize("z", [0.5, 1, 2.5, 10, 3 + 4j, -2.5 + 0.1j, 0.1 - 7j, 40 + 20j, -9.5])
def test_gamma_matches_mpmath(z):
    assert rel(gamma(z), mpmath.gamma(z)) < 1e-12


def test_gamma_poles_raise():
    for n in (0, -1, -7):
        with pytest.raises(errors.PoleError):
            gamma(n)
    assert rgamma(-3) == 0


@given(re_part, im_part)
def test_gamma_recurrence(a, b):
    z = complex(a, b)
    if abs(z - round(a)) < 1e-3 and round(a) <= 0:
        return
    g, g1 = gamma(z), gamma(z + 1)
    assert rel(g1, z * g) < 1e-11


@given(re_part, im_part)
def test_gamma_conjugate_symmetry(a, b):
    z = complex(a, b)
    if abs(z - round(a)) < 1e-3 and round(a) <= 0:
        return
    assert rel(gamma(z.conjugate()), gamma(z).conjugate()) < 1e-13


@given(st.floats(0.1, 60, **finite), st.floats(-200, 200, **finite))
def test_loggamma_real_part(a, b):
    z = complex(a, b)
    assert abs(loggamma(z).real - float(mpmath.loggamma(z).real)) < 1e-10 * max(1, abs(z))


def test_gamma_extended_precision():
    v = gamma(0.3 + 2j, dps=40)
    with mpmath.workdps(40):
        assert abs(v - mpmath.gamma(mpmath.mpc(0.3, 2))) < mpmath.mpf(10) ** -38


def test_pochhammer():
    assert pochhammer(3, 0) == 1
    assert pochhammer(3, 4) == 3 * 4 * 5 * 6
    assert rel(pochhammer(0.5 + 1j, 7), mpmath.rf(0.5 + 1j, 7)) < 1e-14
    with pytest.raises(OverflowError):
        pochhammer(1e10, 40)
    with pytest.raises(errors.DomainError):
        pochhammer(1, -1)


def test_zeta_two():
    assert abs(zeta(2) - math.pi ** 2 / 6) <= 1e-12


@pytest.mark.parametrize("s", [3, 0.5, -1, -3, 0, 2 + 30j, 0.5 + 14.134725j, -0.7 + 3j, 1.5 - 100j])
def test_zeta_matches_mpmath(s):
    assert abs(zeta(s) - complex(mpmath.zeta(s))) <= 1e-12 * max(1, abs(complex(mpmath.zeta(s))))


@pytest.mark.parametrize("s", [2, -3, 0.5 + 21.022j, 3 - 1j, -1.5])
def test_zeta_derivative_matches_mpmath(s):
    ref = complex(mpmath.zeta(s, derivative=1))
    assert abs(zeta_derivative(s) - ref) <= 1e-11 * max(1, abs(ref))


def test_zeta_trivial_zero_and_pole():
    assert abs(zeta(-2)) < 1e-14
    with pytest.raises(errors.PoleError):
        zeta(1)
    with pytest.raises(errors.AccuracyError):
        zeta(0.5 + 2e4j)


def test_zeta_extended_precision():
    v = zeta(0.5 + 10j, dps=40)
    with mpmath.workdps(40):
        assert abs(v - mpmath.zeta(mpmath.mpc(0.5, 10))) < mpmath.mpf(10) ** -35


@given(st.floats(1.1, 8, **finite), st.floats(-50, 50, **finite))
def test_zeta_conjugate_symmetry(a, b):
    z = complex(a, b)
    assert rel(zeta(z.conjugate()), zeta(z).conjugate()) < 1e-13


def test_hurwitz_tail_bound_is_honest():
    for s, a in [(2, 5.0), (1.5 + 3j, 10.0), (-0.5, 20.0)]:
        v, bound = hurwitz_tail(complex(s), a)
        ref = complex(mpmath.zeta(s, a))
        assert abs(v - ref) <= bound + 1e-14 * abs(ref)
