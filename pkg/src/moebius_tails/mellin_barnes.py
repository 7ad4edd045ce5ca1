"""Vertical-line Mellin-Barnes representation of the Moebius tail.

    sum mu(n) (n+x)^-s = (1/2 pi i) int_{c-i inf}^{c+i inf}
                         Gamma(z) Gamma(s-z) / (Gamma(s) zeta(s-z)) x^-z dz,

valid for Re s > 1 and 0 < c < Re s - 1.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleProximityError
from .quadrature import adaptive_gauss_legendre
from .series import Estimate
from .special import as_complex, loggamma, zeta

__all__ = ["ContourSpec", "MellinEstimate", "integrand", "inverse_mellin", "default_abscissa",
           "default_half_height", "POLE_GUARD"]

POLE_GUARD = 1e-8


@dataclass(frozen=True)
class ContourSpec:
    """Vertical segment c + iy, |y| <= half_height, split into ``panels`` initial panels."""

    c: float
    half_height: float
    panels: int = 16

    def __post_init__(self):
        if not self.half_height > 0:
            raise DomainError("half_height must be positive")
        if self.panels < 1:
            raise DomainError("panels must be positive")

    def check(self, s: complex) -> None:
        if not 0.0 < self.c < s.real - 1.0:
            raise DomainError(
                f"abscissa c={self.c} outside the admissible strip (0, {s.real - 1.0})"
            )


@dataclass(frozen=True)
class MellinEstimate(Estimate):
    quadrature_error: float = 0.0
    truncation_error: float = 0.0
    contour: ContourSpec | None = None
    panels: int = 0


def _near_nonpositive_integer(w: complex) -> bool:
    n = round(w.real)
    return n <= 0 and abs(w - n) < POLE_GUARD


def integrand(z, s, x: float) -> complex:
    """Gamma(z) Gamma(s-z) / (Gamma(s) zeta(s-z)) * x^-z, principal log for x^-z."""
    z = as_complex(z)
    s = as_complex(s)
    if x <= 0:
        raise DomainError("x must be positive")
    if _near_nonpositive_integer(z):
        raise PoleProximityError(f"z={z} is within {POLE_GUARD} of a pole of Gamma(z)")
    if _near_nonpositive_integer(s - z):
        raise PoleProximityError(f"z={z} is within {POLE_GUARD} of a pole of Gamma(s-z)")
    zt = zeta(s - z)
    if abs(zt) < POLE_GUARD:
        raise PoleProximityError(f"zeta(s-z) = {zt:.3g} at z={z}: too close to a zero")
    # logs keep the Gamma product in range far up the line
    lg = loggamma(z) + loggamma(s - z) - loggamma(s) - z * math.log(x)
    return cmath.exp(lg) / zt


def default_abscissa(s) -> float:
    s = as_complex(s)
    return min(0.5, 0.5 * (s.real - 1.0))


def _truncation_bound(s: complex, x: float, c: float, y: float) -> float:
    # modelled |int_{|y'|>y} integrand dy'| / 2 pi from |Gamma Gamma| ~ 2 pi |y|^(sigma-1) e^(-pi|y|)
    sigma, tau = s.real, abs(s.imag)
    w = sigma - c
    inv_zeta = zeta(w).real / zeta(2.0 * w).real  # |1/zeta| <= zeta(w)/zeta(2w) on Re = w
    lg_s = loggamma(s).real
    log_mag = (math.log(2.0 * math.pi) + (sigma - 1.0) * math.log(y + tau)
               - 0.5 * math.pi * (2.0 * y - tau) - lg_s - c * math.log(x))
    # tail integral of e^{-pi y} is e^{-pi Y}/pi; both ends; 1/2pi prefactor; factor 2 margin
    return 2.0 * 2.0 * math.exp(log_mag) * inv_zeta / (math.pi * 2.0 * math.pi)


def default_half_height(s, x: float, c: float, tol: float, floor: float = 30.0) -> float:
    """Smallest Y (>= floor, |Im s|+floor) whose modelled truncation is below tol/10."""
    s = as_complex(s)
    y = max(floor, abs(s.imag) + floor)
    while _truncation_bound(s, x, c, y) >= tol / 10.0:
        y += 1.0
    return y


def inverse_mellin(s, x: float, contour: ContourSpec | None = None,
                   tolerance: float = 1e-12, *, nodes: int = 32) -> MellinEstimate:
    """(1/2 pi) int_{-Y}^{Y} integrand(c+iy) dy by adaptive Gauss-Legendre panels."""
    s = as_complex(s)
    x = float(x)
    if s.real <= 1.0:
        raise DomainError(f"Mellin-Barnes representation needs Re s > 1, got {s.real}")
    if not x > 0:
        raise DomainError("x must be positive")
    if contour is None:
        c = default_abscissa(s)
        contour = ContourSpec(c, default_half_height(s, x, c, tolerance))
    contour.check(s)
    c = contour.c

    def f(ys):
        return np.array([integrand(complex(c, y), s, x) for y in ys])

    # the 1/2pi prefactor scales the quadrature tolerance
    res = adaptive_gauss_legendre(f, -contour.half_height, contour.half_height,
                                  tolerance * 2.0 * math.pi, nodes=nodes,
                                  initial_panels=contour.panels)
    value = res.value / (2.0 * math.pi)
    quad_err = res.error / (2.0 * math.pi)
    trunc = _truncation_bound(s, x, c, contour.half_height)
    if s.imag == 0.0:
        # conjugate-symmetric integrand: the imaginary part is pure rounding
        quad_err += abs(value.imag)
        value = complex(value.real, 0.0)
    return MellinEstimate(value, quad_err + trunc, quadrature_error=quad_err,
                          truncation_error=trunc, contour=contour, panels=res.panels)
