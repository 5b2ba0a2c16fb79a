"""Tracing test functions to infinity and detecting how they behave there.

A trace samples u along a ray t -> u(t xi) or a vertical line
t -> u(xbar, t) on a geometric schedule and classifies the samples:

* ``converged``  the last window sits within ``tolerance`` of a constant;
* ``divergent``  the samples climb monotonically through three preset levels;
* ``oscillating`` at least three disjoint windows each swing by ten times the
  tolerance;
* ``inconclusive`` none of the above (never produced by the closed-form
  witnesses in this package, but a classifier needs a fallback).

Tolerances are absolute: the evaluators are exact, so thresholds reflect
scheduling, not noise.  The companion averages (sphere, annulus, off-center
ball, weighted cube averages) realize the equivalent descriptions of the
limit value, and ``decay_ratio_check`` compares the sphere deviation against
the tail energy bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .capacity import CONVERGED as SERIES_CONVERGED
from .capacity import capacity_series
from .errors import PreconditionError, SpecValidationError
from .sampling import annulus_points, box_points, substream, unit_directions
from .weights import (
    STRATIFIED_MC,
    Cube,
    MassEstimate,
    QuadratureConfig,
    WeightSpec,
    sphere_area,
    _eval_resampled,
)
from .witnesses import TestFunction, energy

CONVERGED = "converged"
OSCILLATING = "oscillating"
DIVERGENT = "divergent_to_infinity"
INCONCLUSIVE = "inconclusive"


def geometric_schedule(t0: float, t1: float, n: int) -> np.ndarray:
    """n sample times t0 * ratio^j reaching exactly t1."""
    if not (0 < t0 < t1 and n >= 2):
        raise SpecValidationError("need 0 < t0 < t1 and n >= 2")
    return t0 * (t1 / t0) ** (np.arange(n) / (n - 1))


def octave_schedule(t0: float, octaves: int, per_octave: int = 8) -> np.ndarray:
    """Schedule hitting every dyadic point 2^k * t0 exactly.

    Useful for chains with bumps centered at dyadic heights: the sample grid
    contains the centers bit-exactly.
    """
    j = np.arange(octaves * per_octave + 1)
    return t0 * np.exp2(j / per_octave)


@dataclass(frozen=True)
class TraceConfig:
    tolerance: float = 1e-6
    oscillation_factor: float = 10.0
    n_windows: int = 4
    level_offsets: tuple[float, ...] = (1.0, 2.0, 3.0)

    def __post_init__(self):
        if self.tolerance <= 0 or self.n_windows < 2:
            raise SpecValidationError("tolerance must be positive and n_windows >= 2")


@dataclass(frozen=True)
class TraceReport:
    kind: str
    base: tuple[float, ...]
    times: tuple[float, ...]
    values: tuple[float, ...]
    verdict: str
    c: float | None
    residual: float
    amplitude: float
    n_skipped: int
    config: TraceConfig = field(default_factory=TraceConfig)


def _check_schedule(times: np.ndarray) -> None:
    if times.shape[0] < 50:
        raise SpecValidationError("schedule needs at least 50 points")
    if np.any(np.diff(times) <= 0) or times[0] <= 0:
        raise SpecValidationError("schedule must be positive and increasing")
    if times[-1] / times[0] < 1e6 * (1.0 - 1e-12):
        raise SpecValidationError("schedule must span at least 6 decades")


def classify_samples(times: np.ndarray, values: np.ndarray, config: TraceConfig) -> tuple:
    """(verdict, c, residual, amplitude) for one sampled trace."""
    tol = config.tolerance
    n = values.shape[0]
    window = values[-max(n // 4, 2):]
    # Divergence: monotone up to tolerance, through all preset levels.
    running_max = np.maximum.accumulate(values)
    monotone = bool(np.all(values >= running_max - tol))
    levels = [values[0] + off for off in config.level_offsets]
    crossed = all(np.any(values > lv) for lv in levels)
    amplitude_windows = []
    for chunk in np.array_split(values, config.n_windows):
        if chunk.size:
            amplitude_windows.append(float(chunk.max() - chunk.min()))
    amplitude = max(amplitude_windows) if amplitude_windows else 0.0
    if monotone and crossed:
        return DIVERGENT, None, float("inf"), amplitude
    c = float(np.median(window))
    residual = float(np.max(np.abs(window - c)))
    if residual < tol:
        return CONVERGED, c, residual, amplitude
    swinging = sum(1 for a in amplitude_windows if a >= config.oscillation_factor * tol)
    if swinging >= 3:
        return OSCILLATING, None, residual, amplitude
    return INCONCLUSIVE, None, residual, amplitude


def _trace(fn: TestFunction, points: np.ndarray, times: np.ndarray, kind: str, base, config: TraceConfig) -> TraceReport:
    values = fn.u(points)
    good = np.isfinite(values)
    n_skipped = int((~good).sum())
    verdict, c, residual, amplitude = classify_samples(times[good], values[good], config)
    return TraceReport(
        kind=kind,
        base=tuple(float(b) for b in base),
        times=tuple(float(t) for t in times),
        values=tuple(float(v) for v in values),
        verdict=verdict,
        c=c,
        residual=residual,
        amplitude=amplitude,
        n_skipped=n_skipped,
        config=config,
    )


def trace_ray(fn: TestFunction, direction, times, config: TraceConfig = TraceConfig()) -> TraceReport:
    """Sample u(t xi) on the schedule and classify the limit behavior."""
    times = np.asarray(times, dtype=float)
    _check_schedule(times)
    xi = np.asarray(direction, dtype=float)
    if xi.shape[0] != fn.d:
        raise SpecValidationError("direction dimension mismatch")
    norm = float(np.linalg.norm(xi))
    if norm == 0:
        raise SpecValidationError("direction must be nonzero")
    xi = xi / norm
    points = times[:, None] * xi[None, :]
    return _trace(fn, points, times, "ray", xi, config)


def trace_vertical(fn: TestFunction, base, times, config: TraceConfig = TraceConfig()) -> TraceReport:
    """Sample u(xbar, t) on the schedule and classify the limit behavior."""
    times = np.asarray(times, dtype=float)
    _check_schedule(times)
    xbar = np.asarray(base, dtype=float)
    if xbar.shape[0] != fn.d - 1:
        raise SpecValidationError("vertical base must have dimension d - 1")
    points = np.concatenate(
        (np.broadcast_to(xbar, (times.shape[0], fn.d - 1)).copy(), times[:, None]), axis=1
    )
    return _trace(fn, points, times, "vertical", xbar, config)


@dataclass(frozen=True)
class LimitCensus:
    """Verdict census over sampled directions (or vertical base points)."""

    n_rays: int
    verdicts: tuple[str, ...]
    limits: tuple[float | None, ...]
    modal_c: float | None
    fraction_converged: float
    fraction_converged_to_modal: float

    def fraction_with_verdict(self, verdict: str) -> float:
        return sum(1 for v in self.verdicts if v == verdict) / self.n_rays

    def fraction_converged_to(self, c: float, tol: float = 1e-6) -> float:
        hits = sum(
            1
            for v, lim in zip(self.verdicts, self.limits)
            if v == CONVERGED and lim is not None and abs(lim - c) <= tol
        )
        return hits / self.n_rays


def radial_census(
    fn: TestFunction,
    n_rays: int,
    times,
    seed: int,
    config: TraceConfig = TraceConfig(),
) -> LimitCensus:
    """Trace uniformly sampled directions and tally the verdicts.

    The modal limit is the median of the converged limit values and is only
    defined when at least half of the rays converge.
    """
    if n_rays < 16:
        raise SpecValidationError("census needs at least 16 rays")
    rng = substream(seed, "census_directions", n_rays, fn.kind)
    dirs = unit_directions(rng, n_rays, fn.d)
    verdicts = []
    limits = []
    for k in range(n_rays):
        rep = trace_ray(fn, dirs[k], times, config)
        verdicts.append(rep.verdict)
        limits.append(rep.c)
    converged = [c for v, c in zip(verdicts, limits) if v == CONVERGED and c is not None]
    fraction_converged = len(converged) / n_rays
    modal = float(np.median(converged)) if fraction_converged >= 0.5 else None
    if modal is None:
        frac_modal = 0.0
    else:
        frac_modal = sum(1 for c in converged if abs(c - modal) <= 10 * config.tolerance) / n_rays
    return LimitCensus(
        n_rays=n_rays,
        verdicts=tuple(verdicts),
        limits=tuple(limits),
        modal_c=modal,
        fraction_converged=fraction_converged,
        fraction_converged_to_modal=frac_modal,
    )


# ---------------------------------------------------------------------------
# Averages realizing the limit value
# ---------------------------------------------------------------------------


def sphere_average(fn: TestFunction, r: float, c: float, n_dirs: int, seed: int) -> MassEstimate:
    """Monte Carlo average of |u(r xi) - c| over uniform directions."""
    if n_dirs < 2:
        raise SpecValidationError("need at least 2 directions")
    rng = substream(seed, "sphere_average", r, n_dirs)
    dirs = unit_directions(rng, n_dirs, fn.d)
    vals = np.abs(fn.u(r * dirs) - c)
    return MassEstimate(
        float(vals.mean()), float(vals.std(ddof=1)) / math.sqrt(n_dirs), n_dirs, STRATIFIED_MC
    )


def annulus_average(fn: TestFunction, t: float, c: float, quad: QuadratureConfig) -> MassEstimate:
    """Lebesgue-uniform average of |u - c| over B(0,t) \\ B(0,t/2)."""
    n = quad.samples_per_region * quad.radial_strata
    rng = substream(quad.seed, "annulus_average", t, n)
    pts = annulus_points(rng, n, np.zeros(fn.d), t / 2.0, t)
    vals = np.abs(fn.u(pts) - c)
    return MassEstimate(float(vals.mean()), float(vals.std(ddof=1)) / math.sqrt(n), n, STRATIFIED_MC)


def offcenter_average(fn: TestFunction, x, c: float, quad: QuadratureConfig) -> MassEstimate:
    """Lebesgue-uniform average of |u - c| over the ball B(x, |x|/2)."""
    x = np.asarray(x, dtype=float)
    radius = float(np.linalg.norm(x)) / 2.0
    if radius <= 0:
        raise SpecValidationError("off-center average needs |x| > 0")
    n = quad.samples_per_region * quad.radial_strata
    rng = substream(quad.seed, "offcenter_average", tuple(float(v) for v in x), n)
    pts = annulus_points(rng, n, x, 0.0, radius)
    vals = np.abs(fn.u(pts) - c)
    return MassEstimate(float(vals.mean()), float(vals.std(ddof=1)) / math.sqrt(n), n, STRATIFIED_MC)


@dataclass(frozen=True)
class CubeAverage:
    value: float
    std_error: float
    flagged: bool


def cube_average_sequence(
    fn: TestFunction,
    spec: WeightSpec,
    cubes: list[Cube],
    quad: QuadratureConfig,
) -> list[CubeAverage]:
    """Weighted averages ``(integral_Q u w) / (integral_Q w)`` cube by cube.

    Numerator and denominator share the same sample points.  A cube whose
    mass is indistinguishable from zero is flagged rather than divided by.
    """
    out = []
    for cube in cubes:
        lo = np.asarray(cube.lo)
        hi = np.asarray(cube.hi)
        n = quad.samples_per_region
        rng = substream(quad.seed, "cube_average", cube.key())
        pts = box_points(rng, n, lo, hi)
        wvals, _defects = _eval_resampled(spec, pts, lambda r, m: box_points(r, m, lo, hi), rng)
        uvals = fn.u(pts)
        den = float(wvals.mean())
        den_se = float(wvals.std(ddof=1)) / math.sqrt(n)
        if den <= 0 or den < 2.0 * den_se:
            out.append(CubeAverage(float("nan"), float("inf"), True))
            continue
        num = float((uvals * wvals).mean())
        num_se = float((uvals * wvals).std(ddof=1)) / math.sqrt(n)
        value = num / den
        se = abs(value) * math.sqrt(
            (num_se / num) ** 2 + (den_se / den) ** 2
        ) if num != 0 else num_se / den
        out.append(CubeAverage(value, se, False))
    return out


@dataclass(frozen=True)
class DecayRow:
    r: float
    lhs: float
    rhs: float
    ratio: float


def decay_ratio_check(
    fn: TestFunction,
    spec: WeightSpec,
    p: float,
    r_grid,
    c: float,
    quad: QuadratureConfig,
    r_max: float | None = None,
    n_dirs: int = 4096,
) -> list[DecayRow]:
    """Sphere deviation against the tail-energy bound, radius by radius.

    lhs(r) is the integral over the unit sphere of |u(r xi) - c| (the sampled
    average times the sphere area); rhs(r) is the p-th root of the tail
    energy beyond radius r.  Requires a converged capacity series; the bound
    carries an implicit constant, so boundedness of the ratio across the
    grid is the meaningful output.
    """
    series = capacity_series(spec, p, quad)
    if series.verdict != SERIES_CONVERGED:
        raise PreconditionError(
            f"decay check requires a converged capacity series, got '{series.verdict}'"
        )
    r_grid = [float(r) for r in r_grid]
    if r_max is None:
        r_max = 4.0 * max(r_grid)
    rows = []
    area = sphere_area(fn.d)
    for r in r_grid:
        sa = sphere_average(fn, r, c, n_dirs, quad.seed)
        lhs = area * sa.value
        tail = energy(fn, spec, p, quad, truncation_radius=r_max, r_inner=r)
        rhs = tail.value ** (1.0 / p)
        ratio = lhs / rhs if rhs > 0 else math.inf if lhs > 0 else 0.0
        rows.append(DecayRow(r=r, lhs=lhs, rhs=rhs, ratio=ratio))
    return rows
