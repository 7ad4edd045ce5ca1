"""Decay-exponent fits and the conjecture verdict.

The Moebius tail oscillates and can cross zero, so fits use an envelope:
within each bin of ``bin_decades`` in log10 x only the sample with the
largest |value| is kept, then log|value| is regressed on log x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import DegenerateFitError, DomainError, FitError, InsufficientSpanError
from .moebius import DEFAULT_BLOCK_SIZE, DEFAULT_CAPACITY
from .series import SeriesParams, TruncationPlan, moebius_tails, plain_tail
from .special import as_complex

__all__ = [
    "SampleSeries",
    "FitResult",
    "ConjectureReport",
    "fit_decay_exponent",
    "sample_moebius_tails",
    "sample_plain_tails",
    "conjecture_report",
    "log_grid",
    "DEFAULT_CONJECTURE_CUTOFF",
]

DEFAULT_CONJECTURE_CUTOFF = 10 ** 9
NOISE_FACTOR = 3.0


@dataclass(frozen=True)
class SampleSeries:
    x: np.ndarray
    value: np.ndarray  # complex
    error: np.ndarray
    s: complex | None = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.value, dtype=complex)
        e = np.asarray(self.error, dtype=float)
        if not (x.shape == v.shape == e.shape) or x.ndim != 1:
            raise DomainError("x, value and error must be 1-d arrays of equal length")
        if np.any(x <= 0) or np.any(np.diff(x) <= 0):
            raise DomainError("x must be positive and strictly increasing")
        if np.any(~(e > 0)):
            raise DomainError("every error estimate must be positive")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "error", e)

    @classmethod
    def from_points(cls, points, s=None) -> "SampleSeries":
        xs, vs, es = zip(*points) if points else ((), (), ())
        return cls(np.array(xs), np.array(vs), np.array(es), s)

    def __len__(self) -> int:
        return len(self.x)

    @property
    def admitted(self) -> np.ndarray:
        """Mask of points whose signal dominates truncation noise."""
        return np.abs(self.value) > NOISE_FACTOR * self.error

    def scaled(self, factor: float) -> "SampleSeries":
        return SampleSeries(self.x, self.value * factor, self.error * abs(factor), self.s)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual_rms: float
    slope_halfwidth: float
    sigma_m_estimate: float
    points_used: int = 0
    x_used: tuple = ()


def log_grid(xmin: float, xmax: float, points: int) -> np.ndarray:
    return np.logspace(math.log10(xmin), math.log10(xmax), points)


def _envelope(x: np.ndarray, mag: np.ndarray, bin_decades: float) -> tuple[np.ndarray, np.ndarray]:
    lx = np.log10(x)
    idx = np.floor((lx - lx[0]) / bin_decades + 1e-9).astype(int)
    keep = []
    for b in np.unique(idx):
        members = np.nonzero(idx == b)[0]
        keep.append(members[np.argmax(mag[members])])
    keep = np.array(keep)
    return x[keep], mag[keep]


def fit_decay_exponent(samples: SampleSeries, *, bin_decades: float = 0.5,
                       confidence: float = 0.95) -> FitResult:
    """Least-squares slope of log|value| against log x over the bin-max envelope."""
    mask = samples.admitted
    if not mask.any():
        raise DegenerateFitError("no sample rises above 3x its error estimate")
    x = samples.x[mask]
    mag = np.abs(samples.value[mask])
    if len(x) < 5:
        raise InsufficientSpanError(f"need >= 5 admitted points, have {len(x)}")
    if math.log10(x[-1] / x[0]) < 2.0 - 1e-9:
        raise InsufficientSpanError(
            f"admitted points span {math.log10(x[-1] / x[0]):.2f} decades, need >= 2"
        )
    ex, emag = _envelope(x, mag, bin_decades)
    if len(ex) < 3:
        raise InsufficientSpanError("envelope has fewer than 3 bins")
    lx, ly = np.log(ex), np.log(emag)
    reg = stats.linregress(lx, ly)
    resid = ly - (reg.intercept + reg.slope * lx)
    dof = len(lx) - 2
    half = float(stats.t.ppf(0.5 + 0.5 * confidence, dof) * reg.stderr)
    sigma = as_complex(samples.s).real if samples.s is not None else math.nan
    return FitResult(
        slope=float(reg.slope),
        intercept=float(reg.intercept),
        residual_rms=float(np.sqrt(np.mean(resid ** 2))),
        slope_halfwidth=half,
        sigma_m_estimate=float(reg.slope) + sigma,
        points_used=len(lx),
        x_used=tuple(float(v) for v in ex),
    )


def sample_moebius_tails(s, x_grid: Sequence[float], plan: TruncationPlan | None = None, *,
                         workers: int | None = None, block_size: int = DEFAULT_BLOCK_SIZE,
                         capacity: int = DEFAULT_CAPACITY) -> SampleSeries:
    """Direct Moebius tails on a grid (one sieve pass); default plan cuts at N = 1e9."""
    s = as_complex(s)
    if plan is None:
        plan = TruncationPlan.fixed(min(DEFAULT_CONJECTURE_CUTOFF, capacity))
    xs = np.asarray(sorted(x_grid), dtype=float)
    ests = moebius_tails(s, xs, plan, workers=workers, block_size=block_size, capacity=capacity)
    return SampleSeries(xs, np.array([e.value for e in ests]), np.array([e.error for e in ests]), s)


def sample_plain_tails(s, x_grid: Sequence[float]) -> SampleSeries:
    s = as_complex(s)
    xs = np.asarray(sorted(x_grid), dtype=float)
    ests = [plain_tail(SeriesParams(s, x)) for x in xs]
    vals = np.array([e.value for e in ests])
    errs = np.array([max(e.error, 1e-300) for e in ests])
    return SampleSeries(xs, vals, errs, s)


@dataclass(frozen=True)
class ConjectureReport:
    s: complex
    epsilon: float
    samples: SampleSeries
    fit: FitResult | None
    conjectured_slope: float
    epsilon_slope: float
    verdict: str  # consistent / inconsistent / inconclusive
    exponent_match: bool
    threshold: float
    notes: list = field(default_factory=list)

    @property
    def fitted_slope(self) -> float:
        return self.fit.slope if self.fit else math.nan

    @property
    def sigma_m_estimate(self) -> float:
        return self.fit.sigma_m_estimate if self.fit else math.nan


def judge(fit: FitResult | None, sigma: float, epsilon: float = 0.0, *,
          threshold: float = 0.15, max_halfwidth: float = 0.5) -> tuple[str, bool]:
    """(verdict, exponent_match) for a fitted slope against 1/2 - sigma.

    The conjecture is an upper bound, so any slope at or below the
    epsilon-relaxed exponent (plus allowance) is "consistent";
    ``exponent_match`` is the two-sided test |fitted - conjectured| <= allowance.
    """
    if fit is None or not math.isfinite(fit.slope_halfwidth) or fit.slope_halfwidth > max_halfwidth:
        return "inconclusive", False
    conj = 0.5 - sigma
    allowance = max(threshold, fit.slope_halfwidth)
    verdict = "consistent" if fit.slope <= conj + epsilon + allowance else "inconsistent"
    return verdict, abs(fit.slope - conj) <= allowance


def conjecture_report(s, x_grid: Sequence[float], epsilon: float = 0.0, *,
                      plan: TruncationPlan | None = None, workers: int | None = None,
                      block_size: int = DEFAULT_BLOCK_SIZE, capacity: int = DEFAULT_CAPACITY,
                      threshold: float = 0.15, bin_decades: float = 0.5) -> ConjectureReport:
    """Fit the decay of the direct Moebius tail and compare with x^(1/2 - sigma + epsilon)."""
    s = as_complex(s)
    if s.real <= 1.0:
        raise DomainError(f"conjecture report needs Re s > 1, got {s.real}")
    if epsilon < 0:
        raise DomainError("epsilon must be nonnegative")
    xs = np.asarray(sorted(x_grid), dtype=float)
    if len(xs) < 2 or math.log10(xs[-1] / xs[0]) < 2.0 - 1e-9:
        raise InsufficientSpanError("x grid must span at least two decades")
    samples = sample_moebius_tails(s, xs, plan, workers=workers, block_size=block_size,
                                   capacity=capacity)
    notes = []
    try:
        fit = fit_decay_exponent(samples, bin_decades=bin_decades)
    except FitError as exc:
        fit = None
        notes.append(str(exc))
    dropped = int((~samples.admitted).sum())
    if dropped:
        notes.append(f"{dropped} grid point(s) below 3x modelled truncation error were excluded")
    verdict, match = judge(fit, s.real, epsilon, threshold=threshold)
    return ConjectureReport(
        s=s, epsilon=epsilon, samples=samples, fit=fit,
        conjectured_slope=0.5 - s.real, epsilon_slope=0.5 - s.real + epsilon,
        verdict=verdict, exponent_match=match, threshold=threshold, notes=notes,
    )
