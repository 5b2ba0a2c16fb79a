"""The dyadic capacity series at infinity and its translated sweep.

For p > 1 the series has per-annulus terms

    term_i = (2^i)^{p/(p-1)} * (integral_{A_i} w dx)^{1/(1-p)},

summed over the shells A_i = {2^i <= |x - center| < 2^{i+1}}.  For p = 1 the
role of the sum is played by the running supremum of
``2^i * (integral_{A_i} w)^{-1}``.  Finiteness of the full series governs the
existence of unique almost sure radial limits; its translated variant, with
annuli centered at (0, ..., 0, t), governs vertical limits for product
weights.

Every truncated sum is finite, so divergence is asserted from the tail trend
of the terms, never from the magnitude of a partial sum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpecValidationError
from .weights import (
    DyadicAnnulus,
    QuadratureConfig,
    WeightSpec,
    dual_mass,
    inv_ess_sup,
)

CONVERGED = "converged"
DIVERGED = "diverged"
INCONCLUSIVE = "inconclusive"

UNIFORMLY_BOUNDED = "uniformly_bounded"
GROWING = "growing"

_MIN_TERMS = 8
_CONV_RATIO = 0.9
_DIV_RATIO = 1.0


@dataclass(frozen=True)
class SeriesReport:
    """Per-annulus terms, running sums (or maxima for p = 1), and verdict."""

    p: float
    i_min: int
    i_max: int
    center: tuple[float, ...]
    terms: tuple[float, ...]
    term_errors: tuple[float, ...]
    partial: tuple[float, ...]
    verdict: str
    trend_slope: float

    @property
    def final_sum(self) -> float:
        return self.partial[-1]


def classify_series(terms, p: float = 2.0) -> tuple[str, float]:
    """Convergence verdict from the tail trend of positive terms.

    For p > 1 a geometric fit on the last half gives the per-index ratio
    ``2^slope``; a ratio at most 0.9 is converged, a ratio of at least 1.0
    with terms bounded away from zero is diverged, anything between is
    inconclusive.  For p = 1 the running maximum decides: stabilized over the
    last half means the supremum is finite, new maxima mean it is growing.
    Fewer than 8 terms are never classified.
    """
    terms = np.asarray(terms, dtype=float)
    n = terms.shape[0]
    if n < _MIN_TERMS:
        return INCONCLUSIVE, 0.0
    half = n // 2
    if p == 1:
        running = np.maximum.accumulate(terms)
        slope = _slope_log2(terms[half:])
        if running[-1] <= running[half - 1] * (1.0 + 1e-12):
            return CONVERGED, slope
        return DIVERGED, slope
    slope = _slope_log2(terms[half:])
    ratio = 2.0**slope
    if ratio <= _CONV_RATIO:
        return CONVERGED, slope
    if ratio >= _DIV_RATIO and float(terms[half:].min()) > 0.0:
        return DIVERGED, slope
    return INCONCLUSIVE, slope


def _slope_log2(tail: np.ndarray) -> float:
    if tail.shape[0] < 2 or np.any(tail <= 0):
        return 0.0
    idx = np.arange(tail.shape[0], dtype=float)
    return float(np.polyfit(idx, np.log2(tail), 1)[0])


def capacity_series(
    spec: WeightSpec,
    p: float,
    quad: QuadratureConfig,
    i_range: tuple[int, int] = (1, 30),
    center: tuple[float, ...] | None = None,
) -> SeriesReport:
    """Compute the truncated capacity series over annuli i_min .. i_max."""
    if p < 1:
        raise SpecValidationError("capacity series needs p >= 1")
    i_min, i_max = i_range
    if not (i_min <= i_max and i_max <= 60):
        raise SpecValidationError("need i_min <= i_max <= 60")
    if center is None:
        center = (0.0,) * spec.d
    terms = []
    errors = []
    for i in range(i_min, i_max + 1):
        annulus = DyadicAnnulus(index=i, center=center, d=spec.d)
        scale = 2.0**i
        if p == 1:
            est = inv_ess_sup(spec, annulus, quad)
            terms.append(scale * est.value)
            errors.append(scale * est.std_error)
        else:
            est = dual_mass(spec, annulus, p, quad)
            factor = scale ** (p / (p - 1.0))
            terms.append(factor * est.value)
            errors.append(factor * est.std_error)
    terms_arr = np.asarray(terms)
    partial = np.maximum.accumulate(terms_arr) if p == 1 else np.cumsum(terms_arr)
    verdict, slope = classify_series(terms_arr, p)
    return SeriesReport(
        p=p,
        i_min=i_min,
        i_max=i_max,
        center=tuple(center),
        terms=tuple(float(t) for t in terms_arr),
        term_errors=tuple(float(e) for e in errors),
        partial=tuple(float(s) for s in partial),
        verdict=verdict,
        trend_slope=slope,
    )


def translated_series(
    spec: WeightSpec,
    p: float,
    t: float,
    quad: QuadratureConfig,
    i_range: tuple[int, int] = (1, 30),
) -> SeriesReport:
    """Capacity series with annuli centered at (0, ..., 0, t)."""
    if t < 0:
        raise SpecValidationError("translation must be nonnegative")
    center = (0.0,) * (spec.d - 1) + (float(t),)
    return capacity_series(spec, p, quad, i_range=i_range, center=center)


@dataclass(frozen=True)
class SweepReport:
    """Translated series across a t-grid with a uniformity verdict."""

    p: float
    t_grid: tuple[float, ...]
    reports: tuple[SeriesReport, ...]
    final_sums: tuple[float, ...]
    verdict: str


def translation_sweep(
    spec: WeightSpec,
    p: float,
    t_grid,
    quad: QuadratureConfig,
    i_range: tuple[int, int] = (1, 24),
) -> SweepReport:
    """Evaluate the translated series over an increasing grid of shifts.

    ``growing`` means the final partial sums increased by at least a factor
    of two across the top decade of t; ``uniformly_bounded`` means they vary
    by less than ten percent over the whole grid.
    """
    t_grid = [float(t) for t in t_grid]
    if len(t_grid) < 6:
        raise SpecValidationError("sweep needs at least 6 translation values")
    if any(t_grid[i] >= t_grid[i + 1] for i in range(len(t_grid) - 1)):
        raise SpecValidationError("translation grid must be increasing")
    positive = [t for t in t_grid if t > 0]
    if not positive or t_grid[-1] / positive[0] < 1000.0 * (1.0 - 1e-12):
        raise SpecValidationError("translation grid must span at least 3 decades")
    reports = tuple(translated_series(spec, p, t, quad, i_range=i_range) for t in t_grid)
    finals = np.asarray([r.final_sum for r in reports])
    top_start = next(i for i, t in enumerate(t_grid) if t >= t_grid[-1] / 10.0)
    growth = finals[-1] / finals[top_start]
    spread = finals.max() / finals.min()
    if growth >= 2.0:
        verdict = GROWING
    elif spread < 1.1 or growth <= 1.1:
        # Flat everywhere, or flat-to-decaying across the top decade: the
        # supremum over shifts is realized on the grid and is finite.
        verdict = UNIFORMLY_BOUNDED
    else:
        verdict = INCONCLUSIVE
    return SweepReport(
        p=p,
        t_grid=tuple(t_grid),
        reports=reports,
        final_sums=tuple(float(s) for s in finals),
        verdict=verdict,
    )
