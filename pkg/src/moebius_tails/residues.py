"""Residue expansion of the Mellin-Barnes integrand to the right of the contour.

Singularities right of the line: z = s + n from Gamma(s-z) (double where
zeta(-n) = 0, i.e. even n >= 2) and z = s - rho at nontrivial zeros rho.
Each contribution is computed by trapezoidal quadrature on a small circle,
which does not care about pole order; simple poles also have closed forms.

Shifting the contour right picks up residues clockwise, so the tail equals
ORIENTATION_SIGN times the sum of counter-clockwise contour integrals.
"""
from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DomainError, EnclosureError, ZeroTableError, ZeroTableParseError
from .mellin_barnes import integrand
from .special import as_complex, loggamma, pochhammer, zeta, zeta_derivative

__all__ = [
    "ZeroTable",
    "ResidueTerm",
    "AsymptoticParts",
    "ORIENTATION_SIGN",
    "load_zero_table",
    "bundled_zero_table",
    "pole_contribution",
    "n_pole_residue",
    "zero_residue",
    "residue_term",
    "asymptotic_parts",
    "asymptotic_sum",
    "calibrate_orientation",
]

# Frozen from calibrate_orientation() at s = 2.5, x = 100.
ORIENTATION_SIGN = -1

DEFAULT_NODES = 64
DEFAULT_RADIUS = 0.25
ZERO_CHECK_TOLERANCE = 1e-5


@dataclass(frozen=True)
class ZeroTable:
    """Ordinates gamma_k > 0 of zeros 1/2 + i gamma_k, strictly increasing."""

    ordinates: tuple[float, ...]
    source: str = "<memory>"

    def __post_init__(self):
        ords = tuple(float(g) for g in self.ordinates)
        object.__setattr__(self, "ordinates", ords)
        for k, g in enumerate(ords):
            if not g > 0:
                raise ZeroTableError(f"{self.source}: ordinate #{k + 1} = {g} is not positive")
            if k and g <= ords[k - 1]:
                raise ZeroTableError(
                    f"{self.source}: ordinates not strictly increasing at #{k + 1} "
                    f"({ords[k - 1]} then {g})"
                )

    def __len__(self) -> int:
        return len(self.ordinates)

    def zeros(self, count: int | None = None) -> list[complex]:
        return [complex(0.5, g) for g in self.ordinates[:count]]

    def validate(self, count: int | None = None) -> None:
        """Check |zeta(1/2 + i gamma_k)| < 1e-5 for the first ``count`` ordinates."""
        count = len(self) if count is None else count
        if count > len(self):
            raise ZeroTableError(f"asked for {count} zeros, table {self.source} holds {len(self)}")
        _validated_prefix(self.ordinates[:count], self.source)


@lru_cache(maxsize=32)
def _validated_prefix(ordinates: tuple[float, ...], source: str) -> None:
    for k, g in enumerate(ordinates):
        v = abs(zeta(complex(0.5, g)))
        if v >= ZERO_CHECK_TOLERANCE:
            raise ZeroTableError(
                f"{source}: |zeta(1/2 + {g} i)| = {v:.3g} >= {ZERO_CHECK_TOLERANCE} (entry #{k + 1})"
            )


def load_zero_table(path) -> ZeroTable:
    """Parse one decimal ordinate per line; blank lines and '#' lines are skipped."""
    path = Path(path)
    ords = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                g = float(line)
            except ValueError:
                raise ZeroTableParseError(str(path), lineno, line) from None
            if not math.isfinite(g):
                raise ZeroTableParseError(str(path), lineno, line)
            ords.append(g)
    return ZeroTable(tuple(ords), str(path))


def bundled_zero_table() -> ZeroTable:
    """First 100 ordinates shipped with the package."""
    ref = resources.files("moebius_tails") / "data" / "zeta_zeros_100.txt"
    with resources.as_file(ref) as p:
        return load_zero_table(p)


# -- singularity bookkeeping ------------------------------------------------------

def _nearby_singularities(s: complex, z0: complex, reach: float,
                          table: ZeroTable | None) -> list[complex]:
    """Singularities of the integrand within ``reach`` of z0."""
    out = []
    # Gamma(z): z = 0, -1, -2, ...
    for n in range(math.floor(z0.real - reach), math.ceil(z0.real + reach) + 1):
        if n <= 0 and abs(z0 - n) <= reach:
            out.append(complex(n))
    # Gamma(s-z): z = s + n
    w = z0 - s
    for n in range(max(0, math.floor(w.real - reach)), math.ceil(w.real + reach) + 1):
        if abs(w - n) <= reach:
            out.append(s + n)
    # zeta(s-z) = 0 at nontrivial zeros: z = s - 1/2 -+ i gamma
    if table is not None and abs(z0.real - (s.real - 0.5)) <= reach:
        for sgn in (1.0, -1.0):
            # z = s - 1/2 - i sgn gamma  ->  gamma = sgn (Im s - Im z)
            target = sgn * (s.imag - z0.imag)
            lo = bisect.bisect_left(table.ordinates, target - reach)
            hi = bisect.bisect_right(table.ordinates, target + reach)
            for g in table.ordinates[lo:hi]:
                z = s - complex(0.5, sgn * g)
                if abs(z - z0) <= reach:
                    out.append(z)
    return out


def _default_radius(s: complex, z0: complex, table: ZeroTable | None) -> float:
    near = [z for z in _nearby_singularities(s, z0, 2.0 * DEFAULT_RADIUS + 2.0, table)
            if abs(z - z0) > 1e-9]
    if not near:
        return DEFAULT_RADIUS
    return min(DEFAULT_RADIUS, 0.5 * min(abs(z - z0) for z in near))


def pole_contribution(s, x: float, z0, radius: float | None = None,
                      nodes: int = DEFAULT_NODES, table: ZeroTable | None = None) -> complex:
    """(1/2 pi i) times the counter-clockwise integral of the integrand on |z - z0| = radius.

    ``table`` (default: the bundled one) is only used to check that no other
    nontrivial-zero singularity lies within 2 * radius of z0.
    """
    s = as_complex(s)
    z0 = as_complex(z0)
    if x <= 0:
        raise DomainError("x must be positive")
    if table is None:
        table = bundled_zero_table()
    if radius is None:
        radius = _default_radius(s, z0, table)
    if not radius > 0:
        raise DomainError("radius must be positive")
    others = [z for z in _nearby_singularities(s, z0, 2.0 * radius, table) if abs(z - z0) > 1e-9]
    if others:
        raise EnclosureError(
            f"singularity {others[0]} lies within 2*radius={2 * radius:g} of z0={z0}"
        )
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    acc = 0j
    for t in theta:
        dz = radius * cmath.exp(1j * t)
        acc += integrand(z0 + dz, s, x) * dz
    return acc / nodes


# -- closed forms at simple poles ------------------------------------------------------

def n_pole_residue(s, x: float, n: int) -> complex:
    """Residue at z = s + n where zeta(-n) != 0 (n = 0 or n odd).

    Gamma(s-z) ~ (-1)^(n+1) / (n! (z - s - n)) there, so the residue is
    (-1)^(n+1) (s)_n x^(-s-n) / (n! zeta(-n)).
    """
    s = as_complex(s)
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n >= 2 and n % 2 == 0:
        raise DomainError(f"z = s+{n} is a double pole (zeta(-{n}) = 0); use pole_contribution")
    coeff = (-1) ** (n + 1) * pochhammer(s, n) / (math.factorial(n) * zeta(-n))
    return coeff * cmath.exp(-(s + n) * math.log(x))


def zero_residue(s, x: float, rho) -> complex:
    """Residue at z = s - rho for a simple zero rho:
    -Gamma(rho) Gamma(s-rho) / (Gamma(s) zeta'(rho)) x^(rho-s)."""
    s = as_complex(s)
    rho = as_complex(rho)
    lg = loggamma(rho) + loggamma(s - rho) - loggamma(s) + (rho - s) * math.log(x)
    return -cmath.exp(lg) / zeta_derivative(rho)


@dataclass(frozen=True)
class ResidueTerm:
    """Contribution x^exponent (coefficient + log_coefficient log x) of one pole.

    ``coefficient`` is x-independent; at simple poles log_degree = 0 and
    log_coefficient = 0.
    """

    pole: complex
    exponent: complex
    coefficient: complex
    log_degree: int = 0
    log_coefficient: complex = 0j

    def __call__(self, x: float) -> complex:
        lx = math.log(x)
        return cmath.exp(self.exponent * lx) * (self.coefficient + self.log_coefficient * lx)


def residue_term(s, z0, *, x_pair: tuple[float, float] = (10.0, 1000.0),
                 radius: float | None = None, nodes: int = DEFAULT_NODES,
                 table: ZeroTable | None = None, rel_tol: float = 1e-8) -> ResidueTerm:
    """Describe a pole by circle quadrature at two x values.

    The x-dependence x^-z0 (A + B log x) is solved from both values; a
    nonzero B flags log_degree = 1 (e.g. double poles at z = s + 2k).
    """
    s = as_complex(s)
    z0 = as_complex(z0)
    vals = []
    for x in x_pair:
        c = pole_contribution(s, x, z0, radius, nodes, table)
        vals.append(c * cmath.exp(z0 * math.log(x)))
    l1, l2 = (math.log(x) for x in x_pair)
    b = (vals[1] - vals[0]) / (l2 - l1)
    a = vals[0] - b * l1
    if abs(b) <= rel_tol * (abs(a) + abs(b)):
        return ResidueTerm(z0, -z0, 0.5 * (vals[0] + vals[1]), 0)
    return ResidueTerm(z0, -z0, a, 1, b)


# -- assembly ------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticParts:
    pole_part: complex
    zero_part: complex
    contributions: list = field(default_factory=list)  # (z0, signed contribution)
    zero_pairs: int = 0

    @property
    def total(self) -> complex:
        return self.pole_part + self.zero_part

    @property
    def last_pair(self) -> float:
        """|contribution of the last zero pair|: a partial-sum stability indicator.

        The zero sum is not known to converge, so this is reported, not bounded.
        """
        if not self.zero_pairs:
            return 0.0
        return abs(self.contributions[-1][1] + self.contributions[-2][1])


def asymptotic_parts(s, x: float, n_max: int, zero_pairs: int, table: ZeroTable | None = None,
                     *, nodes: int = DEFAULT_NODES, sign: int = ORIENTATION_SIGN) -> AsymptoticParts:
    """Signed pole contributions at z = s+n (n <= n_max) and at z = s - rho, s - conj(rho)."""
    s = as_complex(s)
    if s.real <= 1.0:
        raise DomainError(f"residue expansion needs Re s > 1, got {s.real}")
    if n_max < 0 or zero_pairs < 0:
        raise DomainError("n_max and zero_pairs must be nonnegative")
    if table is None:
        table = bundled_zero_table()
    if zero_pairs > len(table):
        raise DomainError(f"{zero_pairs} zero pairs requested, table holds {len(table)}")
    table.validate(zero_pairs)
    contribs = []
    pole_part = 0j
    for n in range(n_max + 1):
        c = sign * pole_contribution(s, x, s + n, nodes=nodes, table=table)
        contribs.append((s + n, c))
        pole_part += c
    zero_part = 0j
    for g in table.ordinates[:zero_pairs]:
        pair = 0j
        for rho in (complex(0.5, g), complex(0.5, -g)):
            c = sign * pole_contribution(s, x, s - rho, nodes=nodes, table=table)
            contribs.append((s - rho, c))
            pair += c
        zero_part += pair
    if s.imag == 0.0:
        # real s, x: conjugate pairs and real-axis poles give real totals
        pole_part = complex(pole_part.real, 0.0)
        zero_part = complex(zero_part.real, 0.0)
    return AsymptoticParts(pole_part, zero_part, contribs, zero_pairs)


def asymptotic_sum(s, x: float, n_max: int, zero_pairs: int, table: ZeroTable | None = None,
                   *, nodes: int = DEFAULT_NODES) -> complex:
    """sum_{n<=n_max} R_n x^(-s-n) + sum over the first zero pairs of R_rho x^(rho-s)."""
    return asymptotic_parts(s, x, n_max, zero_pairs, table, nodes=nodes).total


def calibrate_orientation(s: complex = 2.5, x: float = 100.0, n_max: int = 1,
                          zero_pairs: int = 10) -> int:
    """Recover the global orientation sign by comparison with the direct sum."""
    from .series import SeriesParams, TruncationPlan, moebius_tail

    unsigned = asymptotic_parts(s, x, n_max, zero_pairs, sign=1).total
    direct = moebius_tail(SeriesParams(s, x, TruncationPlan(1e-12))).value
    return 1 if (direct / unsigned).real > 0 else -1
