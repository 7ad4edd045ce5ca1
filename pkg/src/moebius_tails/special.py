"""Complex Gamma, zeta, zeta' and Pochhammer symbols.

Double precision by default. ``zeta``, ``zeta_derivative``, ``gamma`` and
``pochhammer`` also take ``dps=`` (decimal digits) and then run the same
algorithms in mpmath arithmetic, returning ``mpmath.mpc``; that mode exists
for oracle duty and is slow.

Zeta is evaluated by Euler-Maclaurin summation everywhere it is needed
(including Re s < 1/2), never through the functional equation.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, DomainError, PoleError

__all__ = [
    "gamma",
    "loggamma",
    "rgamma",
    "zeta",
    "zeta_derivative",
    "pochhammer",
    "hurwitz_tail",
    "as_complex",
    "LANCZOS_G",
    "LANCZOS_COEFFICIENTS",
    "EM_DEFAULT_ORDER",
    "ZETA_IM_LIMIT",
]

LANCZOS_G = 7.0
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

EM_DEFAULT_ORDER = 15
# Euler-Maclaurin cost grows like |Im s|; beyond this the evaluator refuses.
ZETA_IM_LIMIT = 1.0e4
ZETA_TOLERANCE = 1.0e-15


def as_complex(z) -> complex:
    """Coerce to a finite Python complex or raise DomainError."""
    try:
        w = complex(z)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"not a complex number: {z!r}") from exc
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError(f"non-finite argument {z!r}")
    return w


def _check_finite(w: complex, what: str) -> complex:
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise OverflowError(f"{what} is not representable in double precision")
    return w


def _nonpositive_integer(z: complex, tol: float = 1e-14) -> int | None:
    n = round(z.real)
    if n <= 0 and abs(z - n) <= tol * max(1.0, abs(n)):
        return n
    return None


# -- Bernoulli numbers -------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_even(kmax: int) -> tuple[Fraction, ...]:
    """B_0, B_2, ..., B_{2 kmax} as exact fractions (Akiyama-Tanigawa)."""
    n_max = 2 * kmax
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m % 2 == 0:
            out.append(a[0])
    return tuple(out)


@lru_cache(maxsize=None)
def _em_coefficients(kmax: int) -> tuple[float, ...]:
    """B_{2k}/(2k)! for k = 0..kmax as floats."""
    b = _bernoulli_even(kmax)
    return tuple(float(b[k] / math.factorial(2 * k)) for k in range(kmax + 1))


def bernoulli_over_factorial(k: int) -> Fraction:
    """Exact B_{2k}/(2k)!."""
    return _bernoulli_even(k)[k] / math.factorial(2 * k)


# -- Gamma ---------------------------------------------------------------------

def _log_sin_pi(z: complex) -> complex:
    # Some logarithm of sin(pi z), stable for large |Im z|.
    if abs(z.imag) < 20.0:
        return cmath.log(cmath.sin(math.pi * z))
    if z.imag < 0:
        return _log_sin_pi(z.conjugate()).conjugate()
    w = math.pi * z
    # sin w = (i/2) e^{-iw} (1 - e^{2iw}), |e^{2iw}| tiny for Im w > 0
    return -1j * w + cmath.log(0.5j) + cmath.log(1.0 - cmath.exp(2j * w))


def _lanczos_log(z: complex) -> complex:
    # log Gamma(z) for Re z >= 1/2.
    z -= 1.0
    acc = LANCZOS_COEFFICIENTS[0]
    for i in range(1, len(LANCZOS_COEFFICIENTS)):
        acc += LANCZOS_COEFFICIENTS[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def loggamma(z) -> complex:
    """A logarithm of Gamma(z).

    Not necessarily the principal branch: only ``exp(loggamma(z))`` and the
    real part are meaningful. Used wherever Gamma itself would under- or
    overflow, e.g. far up the imaginary axis.
    """
    z = as_complex(z)
    if _nonpositive_integer(z) is not None:
        raise PoleError(f"Gamma has a pole at {z}")
    if z.real >= 0.5:
        return _lanczos_log(z)
    return math.log(math.pi) - _log_sin_pi(z) - _lanczos_log(1.0 - z)


def gamma(z, dps: int | None = None):
    """Gamma(z): Lanczos (g=7, 9 terms) for Re z >= 1/2, reflection below."""
    if dps is not None:
        return _gamma_mp(z, dps)
    z = as_complex(z)
    if _nonpositive_integer(z) is not None:
        raise PoleError(f"Gamma has a pole at {z}")
    if z.real >= 0.5:
        if abs(z) < 140.0:
            zm = z - 1.0
            acc = LANCZOS_COEFFICIENTS[0]
            for i in range(1, len(LANCZOS_COEFFICIENTS)):
                acc += LANCZOS_COEFFICIENTS[i] / (zm + i)
            t = zm + LANCZOS_G + 0.5
            # split the power so it stays in range for moderate |z|
            half = cmath.exp((zm + 0.5) * 0.5 * cmath.log(t))
            val = math.sqrt(2.0 * math.pi) * half * half * cmath.exp(-t) * acc
        else:
            val = cmath.exp(_lanczos_log(z))
        return _check_finite(val, f"Gamma({z})")
    # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    if abs(z.imag) < 20.0:
        val = math.pi / (cmath.sin(math.pi * z) * gamma(1.0 - z))
    else:
        val = cmath.exp(loggamma(z))
    return _check_finite(val, f"Gamma({z})")


def rgamma(z) -> complex:
    """1/Gamma(z), zero at the poles of Gamma."""
    z = as_complex(z)
    if _nonpositive_integer(z) is not None:
        return 0j
    return 1.0 / gamma(z)


def _gamma_mp(z, dps: int):
    import mpmath

    with mpmath.workdps(dps + 10):
        z = mpmath.mpc(z)
        n = mpmath.nint(z.real)
        if n <= 0 and abs(z - n) < mpmath.mpf(10) ** (-dps):
            raise PoleError(f"Gamma has a pole at {z}")
        if z.real < 0.5:
            return mpmath.pi / (mpmath.sin(mpmath.pi * z) * _gamma_mp(1 - z, dps))
        # recurrence up to a half plane where Stirling converges fast
        shift = max(0, int(dps * 1.2) - int(z.real))
        prod = mpmath.mpc(1)
        for j in range(shift):
            prod *= z + j
        w = z + shift
        kmax = max(10, dps)
        b = _bernoulli_even(kmax)
        series = mpmath.mpc(0)
        wpow = w
        w2 = w * w
        for k in range(1, kmax + 1):
            term = mpmath.mpf(b[k].numerator) / b[k].denominator / (2 * k * (2 * k - 1)) / wpow
            series += term
            if abs(term) < mpmath.mpf(10) ** (-(dps + 8)) * abs(series):
                break
            wpow *= w2
        lg = (w - 0.5) * mpmath.log(w) - w + mpmath.log(2 * mpmath.pi) / 2 + series
        return +(mpmath.exp(lg) / prod)


# -- Pochhammer --------------------------------------------------------------

def pochhammer(s, k: int, dps: int | None = None):
    """Rising factorial (s)_k by the product recurrence (s)_k = (s)_{k-1} (s+k-1)."""
    if k < 0 or int(k) != k:
        raise DomainError(f"pochhammer order must be a nonnegative integer, got {k!r}")
    if dps is not None:
        import mpmath

        with mpmath.workdps(dps):
            s = mpmath.mpc(s)
            acc = mpmath.mpc(1)
            for j in range(int(k)):
                acc *= s + j
            return acc
    s = as_complex(s)
    acc = 1.0 + 0j
    for j in range(int(k)):
        acc *= s + j
        if not (math.isfinite(acc.real) and math.isfinite(acc.imag)):
            raise OverflowError(f"pochhammer({s}, {k}) overflows at factor {j + 1}")
    return acc


# -- Euler-Maclaurin machinery -------------------------------------------------

def _em_order_bound(s: complex, order: int) -> float:
    # |B_{2K+2}/(2K+2)! (s)_{2K+1}| * |s+2K+1| / (sigma+2K+1): remainder is this * a^{-sigma-2K-1}
    # max(|s+j|, 1) keeps the bound alive where (s)_{2K+1} vanishes but its
    # s-derivative (needed by zeta') does not
    c = abs(_em_coefficients(order + 1)[order + 1])
    p = math.prod(max(abs(s + j), 1.0) for j in range(2 * order + 1))
    return c * p * abs(s + 2 * order + 1) / (s.real + 2 * order + 1)


def hurwitz_tail(s: complex, a: float, order: int = EM_DEFAULT_ORDER):
    """Euler-Maclaurin value of sum_{m>=0} (a+m)^{-s}, with remainder bound.

    Requires a > 0 and Re s > -2*order-1. The remainder bound is rigorous
    for a >= 1 and degrades gracefully below.
    """
    s = as_complex(s)
    if s == 1:
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    la = math.log(a)
    a_s = cmath.exp(-s * la)  # a^{-s}
    val = a * a_s / (s - 1.0) + 0.5 * a_s
    coeffs = _em_coefficients(order + 1)
    poch = s  # (s)_{2k-1}, starts at k=1
    apow = a_s / a  # a^{-s-2k+1}
    inv_a2 = 1.0 / (a * a)
    for k in range(1, order + 1):
        val += coeffs[k] * poch * apow
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        apow *= inv_a2
    bound = abs(coeffs[order + 1] * poch) * abs(apow) * abs(s + 2 * order + 1) / (s.real + 2 * order + 1)
    return val, bound


def _hurwitz_tail_derivative(s: complex, a: float, order: int) -> complex:
    # d/ds of hurwitz_tail value
    la = math.log(a)
    a_s = cmath.exp(-s * la)
    a1s = a * a_s
    val = -la * a1s / (s - 1.0) - a1s / (s - 1.0) ** 2 - 0.5 * la * a_s
    coeffs = _em_coefficients(order + 1)
    p, dp = s, 1.0 + 0j  # (s)_{2k-1} and its s-derivative
    apow = a_s / a
    inv_a2 = 1.0 / (a * a)
    for k in range(1, order + 1):
        val += coeffs[k] * apow * (dp - la * p)
        for j in (2 * k - 1, 2 * k):
            dp = dp * (s + j) + p
            p = p * (s + j)
        apow *= inv_a2
    return val


def _zeta_cutoff(s: complex, order: int | None, tol: float) -> tuple[int, int]:
    if order is None:
        if s.real >= 0.0:
            return _zeta_cutoff(s, EM_DEFAULT_ORDER, tol)
        # left of the axis the head sum cancels badly; trade order for a short head
        return min(_zeta_cutoff(s, k, tol) for k in range(EM_DEFAULT_ORDER, 41, 5))
    expo = s.real + 2 * order + 1
    if expo <= 0.5:
        raise DomainError(f"Euler-Maclaurin of order {order} is not valid at Re s = {s.real}")
    c = _em_order_bound(s, order)
    m = (c / tol) ** (1.0 / expo) if c > 0 else 1.0
    # keep a^{-s} terms far from where the asymptotic series turns around
    return max(2, int(math.ceil(m)), int(abs(s) / (2.0 * math.pi)) + 1), order


def _check_zeta_arg(s: complex, im_limit: float) -> None:
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if abs(s.imag) > im_limit:
        raise AccuracyError(
            f"|Im s| = {abs(s.imag):g} exceeds the Euler-Maclaurin validity bound {im_limit:g}"
        )


def zeta(s, *, order: int | None = None, tol: float = ZETA_TOLERANCE,
         im_limit: float = ZETA_IM_LIMIT, dps: int | None = None):
    """Riemann zeta by Euler-Maclaurin summation.

    zeta(s) = sum_{n<M} n^-s + M^(1-s)/(s-1) + M^-s/2 + sum_k B_2k/(2k)! (s)_{2k-1} M^(-s-2k+1),
    with M the smallest cutoff whose remainder bound is below ``tol``. ``order``
    is K (default 15; for Re s < 0 it may grow to 40 to keep M small).
    """
    if dps is not None:
        return _zeta_mp(s, dps, derivative=False)
    s = as_complex(s)
    _check_zeta_arg(s, im_limit)
    m, order = _zeta_cutoff(s, order, tol)
    if m > 2:
        logs = np.log(np.arange(1, m, dtype=np.float64))
        head = complex(np.sum(np.exp(-s * logs)))
    else:
        head = 1.0 + 0j
    tail, _ = hurwitz_tail(s, float(m), order)
    return _check_finite(head + tail, f"zeta({s})")


def zeta_derivative(s, *, order: int | None = None, tol: float = ZETA_TOLERANCE,
                    im_limit: float = ZETA_IM_LIMIT, dps: int | None = None):
    """zeta'(s) from the termwise-differentiated Euler-Maclaurin sum."""
    if dps is not None:
        return _zeta_mp(s, dps, derivative=True)
    s = as_complex(s)
    _check_zeta_arg(s, im_limit)
    # log factors cost about one extra digit; tighten the cutoff accordingly
    m, order = _zeta_cutoff(s, order, tol / 10.0)
    if m > 2:
        logs = np.log(np.arange(2, m, dtype=np.float64))
        head = complex(-np.sum(logs * np.exp(-s * logs)))
    else:
        head = 0j
    return _check_finite(head + _hurwitz_tail_derivative(s, float(m), order), f"zeta'({s})")


def _zeta_mp(s, dps: int, derivative: bool):
    import mpmath

    with mpmath.workdps(dps + 10):
        s = mpmath.mpc(s)
        if s == 1:
            raise PoleError("zeta has a pole at s = 1")
        order = max(EM_DEFAULT_ORDER, dps)
        b = _bernoulli_even(order + 1)
        coeffs = [mpmath.mpf(bk.numerator) / bk.denominator / mpmath.factorial(2 * k)
                  for k, bk in enumerate(b)]
        tol = mpmath.mpf(10) ** (-(dps + 2))
        c = abs(coeffs[order + 1] * mpmath.rf(s, 2 * order + 1))
        expo = s.real + 2 * order + 1
        m = int(mpmath.ceil((c / tol) ** (1 / expo))) + 1
        m = max(m, int(abs(s) / (2 * mpmath.pi)) + 2)
        la = mpmath.log(m)
        a_s = mpmath.exp(-s * la)
        if not derivative:
            val = mpmath.fsum(mpmath.exp(-s * mpmath.log(n)) for n in range(1, m))
            val += m * a_s / (s - 1) + a_s / 2
            p = s
            apow = a_s / m
            for k in range(1, order + 1):
                val += coeffs[k] * p * apow
                p *= (s + 2 * k - 1) * (s + 2 * k)
                apow /= m * m
            return +val
        val = -mpmath.fsum(mpmath.log(n) * mpmath.exp(-s * mpmath.log(n)) for n in range(2, m))
        val += -la * m * a_s / (s - 1) - m * a_s / (s - 1) ** 2 - la * a_s / 2
        p, dp = s, mpmath.mpc(1)
        apow = a_s / m
        for k in range(1, order + 1):
            val += coeffs[k] * apow * (dp - la * p)
            for j in (2 * k - 1, 2 * k):
                dp = dp * (s + j) + p
                p = p * (s + j)
            apow /= m * m
        return +val
