"""Parametric weight families on R^d and their masses over annuli and boxes.

A weight is a strictly positive (a.e.) locally integrable function.  The
variants implemented here are the families used throughout the laboratory:

* ``Constant``          w(x) = c
* ``Power``             w(x) = |x|^alpha, alpha > -d
* ``RadialProfile``     w(x) = v(|x|) for a piecewise power/constant profile v
* ``Product``           w(xbar, y) = w1(xbar) * w2(y)
* ``Corridor``          a weight that is pinched inside the dyadic corridor
                        |xbar| <= 2^i, 2^i <= y < 2^{i+1} along the vertical
                        axis and behaves like min(|x|^{-beta}, 1) elsewhere
* ``BumpDepression``    w(x) = min(1, min_i |x - c_i|^alpha), depressions at
                        a list of centers
* ``HalfLinePower``     w(xbar, y) = min(1, y^{-alpha}) for y > 0, else 1

Masses ``integral_A w dx`` are computed in closed form for origin-centered
radial geometry (constant, power, piecewise profiles) and by seeded
stratified Monte Carlo otherwise.  Radial strata are log-spaced so singular
radial weights get balanced per-stratum variance.  Estimates are
bit-reproducible: the substream of every stratum is a pure function of
(seed, region, stratum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    MassIndistinguishableFromZeroError,
    SingularPointError,
    SpecValidationError,
)
from .sampling import annulus_points, box_points, substream

MAX_DIMENSION = 6

CLOSED_FORM = "closed_form"
STRATIFIED_MC = "stratified_mc"

# Resampling rounds for points that land exactly on a singular set.  Each such
# event has probability zero; the counter exists to surface defects, not to
# tolerate broken weights.
_RESAMPLE_ROUNDS = 4


def sphere_area(d: int) -> float:
    """Surface measure of the unit sphere S^{d-1} in R^d."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def ball_volume(d: int, r: float) -> float:
    return sphere_area(d) * r**d / d


# ---------------------------------------------------------------------------
# Radial profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileSegment:
    """One piece ``s -> coeff * s**power`` of a piecewise radial profile."""

    coeff: float
    power: float = 0.0

    def __post_init__(self):
        if not (self.coeff > 0 and math.isfinite(self.coeff)):
            raise SpecValidationError(f"segment coefficient must be positive, got {self.coeff}")
        if not math.isfinite(self.power):
            raise SpecValidationError("segment power must be finite")


@dataclass(frozen=True)
class PiecewiseProfile:
    """A piecewise power/constant profile v on [0, infinity).

    ``segments[j]`` applies on ``[breakpoints[j-1], breakpoints[j])`` with the
    conventions ``breakpoints[-1] = 0`` and ``breakpoints[len] = infinity``.
    """

    breakpoints: tuple[float, ...]
    segments: tuple[ProfileSegment, ...]

    def __post_init__(self):
        if len(self.segments) != len(self.breakpoints) + 1:
            raise SpecValidationError("need exactly one more segment than breakpoints")
        bps = self.breakpoints
        if any(not (b > 0 and math.isfinite(b)) for b in bps):
            raise SpecValidationError("breakpoints must be positive and finite")
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise SpecValidationError("breakpoints must be strictly increasing")

    def value(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        edges = (0.0, *self.breakpoints, math.inf)
        for j, seg in enumerate(self.segments):
            mask = (s >= edges[j]) & (s < edges[j + 1])
            if np.any(mask):
                if seg.power == 0.0:
                    out[mask] = seg.coeff
                else:
                    out[mask] = seg.coeff * s[mask] ** seg.power
        return out

    def integrable_near_zero(self, d: int) -> bool:
        return self.segments[0].power > -d

    def shell_mass(self, d: int, r0: float, r1: float) -> float:
        """Closed form of ``integral_{r0<=|x|<r1} v(|x|) dx`` in R^d."""
        if not 0.0 <= r0 < r1:
            raise SpecValidationError("need 0 <= r0 < r1")
        total = 0.0
        edges = (0.0, *self.breakpoints, math.inf)
        for j, seg in enumerate(self.segments):
            a = max(r0, edges[j])
            b = min(r1, edges[j + 1])
            if a >= b:
                continue
            e = seg.power + d
            if e == 0.0:
                if a == 0.0:
                    raise SpecValidationError("profile is not integrable at the origin")
                total += seg.coeff * math.log(b / a)
            else:
                total += seg.coeff * (b**e - a**e) / e
        return sphere_area(d) * total

    def window_integral(self, r: float) -> float:
        """Closed form of the one-dimensional window ``integral_r^{r+1} v``."""
        return self.shell_mass(1, r, r + 1.0) / sphere_area(1)


def power_profile(alpha: float) -> PiecewiseProfile:
    return PiecewiseProfile(breakpoints=(), segments=(ProfileSegment(1.0, alpha),))


def capped_power_profile(alpha: float) -> PiecewiseProfile:
    """The profile min(1, s^{-alpha}) for alpha > 0: constant 1 up to s=1."""
    if not alpha > 0:
        raise SpecValidationError("capped power profile needs alpha > 0")
    return PiecewiseProfile(
        breakpoints=(1.0,),
        segments=(ProfileSegment(1.0, 0.0), ProfileSegment(1.0, -alpha)),
    )


# ---------------------------------------------------------------------------
# Weight variants
# ---------------------------------------------------------------------------


def _check_dim(d: int, lo: int = 2) -> None:
    if not isinstance(d, int) or not lo <= d <= MAX_DIMENSION:
        raise SpecValidationError(f"dimension must be an integer in [{lo}, {MAX_DIMENSION}], got {d}")


@dataclass(frozen=True)
class Constant:
    c: float
    d: int = 2

    def __post_init__(self):
        _check_dim(self.d, lo=1)
        if not (self.c > 0 and math.isfinite(self.c)):
            raise SpecValidationError("constant weight must be positive and finite")

    def eval_array(self, X: np.ndarray) -> np.ndarray:
        return np.full(X.shape[0], self.c, dtype=float)

    def descriptor(self) -> dict:
        return {"kind": "constant", "d": self.d, "params": {"c": self.c}}


@dataclass(frozen=True)
class Power:
    """w(x) = |x|^alpha.  Locally integrable only for alpha > -d."""

    alpha: float
    d: int = 2

    def __post_init__(self):
        _check_dim(self.d, lo=1)
        if not self.alpha > -self.d:
            raise SpecValidationError(
                f"power weight needs alpha > -d for local integrability, got alpha={self.alpha}, d={self.d}"
            )

    def eval_array(self, X: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(X, axis=1)
        if self.alpha == 0.0:
            return np.ones_like(r)
        with np.errstate(divide="ignore"):
            return r**self.alpha

    def descriptor(self) -> dict:
        return {"kind": "power", "d": self.d, "params": {"alpha": self.alpha}}


@dataclass(frozen=True)
class RadialProfile:
    profile: PiecewiseProfile
    d: int = 2

    def __post_init__(self):
        _check_dim(self.d, lo=1)
        if not self.profile.integrable_near_zero(self.d):
            raise SpecValidationError("radial profile is not locally integrable at the origin")

    def eval_array(self, X: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return self.profile.value(np.linalg.norm(X, axis=1))

    def descriptor(self) -> dict:
        return {
            "kind": "radial_profile",
            "d": self.d,
            "params": {
                "breakpoints": list(self.profile.breakpoints),
                "segments": [{"coeff": s.coeff, "power": s.power} for s in self.profile.segments],
            },
        }


@dataclass(frozen=True)
class Product:
    """w(xbar, y) = w1(xbar) * w2(y) with w2 living on the last coordinate."""

    w1: "WeightSpec"
    w2: "WeightSpec"
    d: int = 3

    def __post_init__(self):
        _check_dim(self.d)
        if self.w2.d != 1:
            raise DimensionMismatchError("second product factor must live on R")
        if self.w1.d + self.w2.d != self.d:
            raise DimensionMismatchError(
                f"product factor dimensions {self.w1.d}+{self.w2.d} do not sum to d={self.d}"
            )

    def eval_array(self, X: np.ndarray) -> np.ndarray:
        d1 = self.w1.d
        return self.w1.eval_array(X[:, :d1]) * self.w2.eval_array(X[:, d1:])

    def descriptor(self) -> dict:
        return {
            "kind": "product",
            "d": self.d,
            "params": {"w1": self.w1.descriptor(), "w2": self.w2.descriptor()},
        }


@dataclass(frozen=True)
class Corridor:
    """Piecewise weight pinched along the vertical dyadic corridor.

    For vertical coordinate t in [2^i, 2^{i+1}) with i >= 0 and |xbar| <= 2^i
    the value is 2^{-(alpha+beta) i - 1} (1 + |xbar|^alpha); everywhere else
    it is min(|x|^{-beta}, 1).  At the overlap planes t = 2^{i+1} the larger
    index wins (a measure-zero convention).
    """

    alpha: float
    beta: float
    d: int = 3

    def __post_init__(self):
        _check_dim(self.d)
        if not (self.alpha >= 0 and self.beta >= 0):
            raise SpecValidationError("corridor weight needs alpha >= 0 and beta >= 0")

    def eval_array(self, X: np.ndarray) -> np.ndarray:
        t = X[:, -1]
        xbar = np.linalg.norm(X[:, :-1], axis=1)
        r = np.linalg.norm(X, axis=1)
        with np.errstate(divide="ignore"):
            out = np.where(r > 0, np.minimum(r ** (-self.beta) if self.beta != 0 else np.ones_like(r), 1.0), 1.0)
        inside = t >= 1.0
        if np.any(inside):
            i = np.floor(np.log2(t, where=inside, out=np.zeros_like(t)))
            inside &= xbar <= 2.0**i
            if np.any(inside):
                vals = 2.0 ** (-(self.alpha + self.beta) * i[inside] - 1.0) * (
                    1.0 + xbar[inside] ** self.alpha
                )
                out[inside] = vals
        return out

    def descriptor(self) -> dict:
        return {"kind": "corridor", "d": self.d, "params": {"alpha": self.alpha, "beta": self.beta}}


@dataclass(frozen=True)
class BumpDepression:
    """w(x) = min(1, min_i |x - c_i|^alpha): depressions of exponent alpha."""

    centers: tuple[tuple[float, ...], ...]
    alpha: float
    d: int = 3

    def __post_init__(self):
        _check_dim(self.d)
        if not self.alpha > 0:
            raise SpecValidationError("depression exponent must be positive")
        if len(self.centers) == 0:
            raise SpecValidationError("need at least one depression center")
        object.__setattr__(
            self, "centers", tuple(tuple(float(x) for x in c) for c in self.centers)
        )
        if any(len(c) != self.d for c in self.centers):
            raise DimensionMismatchError("every depression center must have dimension d")

    def eval_array(self, X: np.ndarray) -> np.ndarray:
        centers = np.asarray(self.centers, dtype=float)
        # Pairwise distances; the center list is small in every construction.
        diff = X[:, None, :] - centers[None, :, :]
        dist = np.min(np.linalg.norm(diff, axis=2), axis=1)
        return np.minimum(1.0, dist**self.alpha)

    def descriptor(self) -> dict:
        return {
            "kind": "bump_depression",
            "d": self.d,
            "params": {"centers": [list(c) for c in self.centers], "alpha": self.alpha},
        }


@dataclass(frozen=True)
class HalfLinePower:
    """w(xbar, y) = min(1, y^{-alpha}) for y > 0 and 1 otherwise."""

    alpha: float
    d: int = 3

    def __post_init__(self):
        _check_dim(self.d)
        if not 0.0 < self.alpha < 1.0:
            raise SpecValidationError("half-line power exponent must lie in (0, 1)")

    def eval_array(self, X: np.ndarray) -> np.ndarray:
        y = X[:, -1]
        out = np.ones_like(y)
        pos = y > 0
        out[pos] = np.minimum(1.0, y[pos] ** (-self.alpha))
        return out

    def descriptor(self) -> dict:
        return {"kind": "half_line_power", "d": self.d, "params": {"alpha": self.alpha}}


WeightSpec = Union[Constant, Power, RadialProfile, Product, Corridor, BumpDepression, HalfLinePower]


def origin_radial_profile(spec: WeightSpec) -> PiecewiseProfile | None:
    """Profile v with w(x) = v(|x|) when the weight is radial about the origin."""
    if isinstance(spec, Constant):
        return PiecewiseProfile((), (ProfileSegment(spec.c, 0.0),))
    if isinstance(spec, Power):
        return power_profile(spec.alpha)
    if isinstance(spec, RadialProfile):
        return spec.profile
    return None


def constant_value(spec: WeightSpec) -> float | None:
    """The constant c if the weight is identically c, else None."""
    if isinstance(spec, Constant):
        return spec.c
    if isinstance(spec, Power) and spec.alpha == 0.0:
        return 1.0
    if isinstance(spec, Product):
        c1 = constant_value(spec.w1)
        c2 = constant_value(spec.w2)
        if c1 is not None and c2 is not None:
            return c1 * c2
    return None


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DyadicAnnulus:
    """The shell 2^i <= |x - center| < 2^{i+1}."""

    index: int
    center: tuple[float, ...] = field(default=None)  # type: ignore[assignment]
    d: int = 3

    def __post_init__(self):
        _check_dim(self.d)
        if self.center is None:
            object.__setattr__(self, "center", (0.0,) * self.d)
        else:
            object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if len(self.center) != self.d:
            raise DimensionMismatchError("annulus center has wrong dimension")
        if self.index > 60:
            raise SpecValidationError("annulus index above 60 would overflow the radius grid")

    @property
    def r_inner(self) -> float:
        return 2.0**self.index

    @property
    def r_outer(self) -> float:
        return 2.0 ** (self.index + 1)

    @property
    def centered_at_origin(self) -> bool:
        return all(c == 0.0 for c in self.center)

    def key(self) -> tuple:
        return ("annulus", self.index, self.center)


@dataclass(frozen=True)
class Cube:
    """Axis-aligned cube given by center and edge length."""

    center: tuple[float, ...]
    edge: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not (self.edge > 0 and math.isfinite(self.edge)):
            raise SpecValidationError("cube edge must be positive and finite")

    @property
    def d(self) -> int:
        return len(self.center)

    @property
    def lo(self) -> tuple[float, ...]:
        return tuple(c - self.edge / 2.0 for c in self.center)

    @property
    def hi(self) -> tuple[float, ...]:
        return tuple(c + self.edge / 2.0 for c in self.center)

    def scaled(self, a: float) -> "Cube":
        return Cube(self.center, a * self.edge)

    def volume(self) -> float:
        return self.edge**self.d

    def key(self) -> tuple:
        return ("cube", self.center, self.edge)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box; the general region under the cube operations."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(x) for x in self.lo))
        object.__setattr__(self, "hi", tuple(float(x) for x in self.hi))
        if len(self.lo) != len(self.hi):
            raise DimensionMismatchError("box corners have different dimensions")
        if any(not (l < h) for l, h in zip(self.lo, self.hi)):
            raise SpecValidationError("box must have positive extent on every axis")

    @property
    def d(self) -> int:
        return len(self.lo)

    def volume(self) -> float:
        return float(np.prod([h - l for l, h in zip(self.lo, self.hi)]))

    def key(self) -> tuple:
        return ("box", self.lo, self.hi)


def as_box(region: Cube | Box) -> Box:
    if isinstance(region, Box):
        return region
    return Box(region.lo, region.hi)


def dyadic_children(cube: Cube) -> list[Cube]:
    """The 2^d congruent subcubes of a cube."""
    half = cube.edge / 2.0
    quarter = cube.edge / 4.0
    out = []
    for bits in range(2**cube.d):
        offs = tuple(
            cube.center[i] + (quarter if (bits >> i) & 1 else -quarter) for i in range(cube.d)
        )
        out.append(Cube(offs, half))
    return out


# ---------------------------------------------------------------------------
# Quadrature configuration and estimates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureConfig:
    """Deterministic Monte Carlo budget.

    Identical configs produce bit-identical estimates regardless of execution
    order, because every (region, stratum) pair owns a private substream.
    """

    seed: int
    samples_per_region: int = 4096
    radial_strata: int = 16
    relative_error_target: float = 1e-2

    def __post_init__(self):
        if self.seed < 0:
            raise SpecValidationError("seed must be a nonnegative integer")
        if self.samples_per_region <= 0 or self.radial_strata <= 0:
            raise SpecValidationError("sample and stratum counts must be positive")
        if not self.relative_error_target > 0:
            raise SpecValidationError("relative error target must be positive")


@dataclass(frozen=True)
class MassEstimate:
    """A numerical integral value with its standard error.

    ``method`` is ``closed_form`` (std_error exactly 0) or ``stratified_mc``.
    ``target_met`` records whether the configured relative error target was
    reached within the sample budget; a miss is a flag, not a failure.
    ``defects`` counts sampled points that landed on a singular set and were
    resampled.
    """

    value: float
    std_error: float
    n_samples: int
    method: str
    target_met: bool = True
    defects: int = 0

    def __post_init__(self):
        if self.value < 0 or self.std_error < 0:
            raise SpecValidationError("mass estimates are nonnegative")
        if self.method == CLOSED_FORM and self.std_error != 0.0:
            raise SpecValidationError("closed-form estimates carry no standard error")
        if self.method == STRATIFIED_MC and self.n_samples <= 0:
            raise SpecValidationError("Monte Carlo estimates need a positive sample count")


def combine_estimates(parts: list[MassEstimate]) -> MassEstimate:
    """Sum of independent estimates with errors combined in quadrature."""
    value = float(sum(p.value for p in parts))
    var = float(sum(p.std_error**2 for p in parts))
    n = int(sum(p.n_samples for p in parts))
    method = CLOSED_FORM if all(p.method == CLOSED_FORM for p in parts) else STRATIFIED_MC
    defects = sum(p.defects for p in parts)
    target_met = all(p.target_met for p in parts)
    if method == CLOSED_FORM:
        return MassEstimate(value, 0.0, n, method, True, defects)
    return MassEstimate(value, math.sqrt(var), max(n, 1), method, target_met, defects)


# ---------------------------------------------------------------------------
# Pointwise evaluation
# ---------------------------------------------------------------------------


def eval_weight(spec: WeightSpec, x) -> float:
    """Evaluate the weight at a single point.

    Raises ``DimensionMismatchError`` for a point of the wrong dimension and
    ``SingularPointError`` if the point lies exactly on the singular set
    (where the formula yields 0 or infinity).
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != spec.d:
        raise DimensionMismatchError(f"point has dimension {x.shape[0]}, weight has {spec.d}")
    val = float(spec.eval_array(x[None, :])[0])
    if not math.isfinite(val) or val <= 0.0:
        raise SingularPointError(f"weight evaluated on its singular set at {tuple(x)}")
    return val


def _eval_resampled(
    spec: WeightSpec, pts: np.ndarray, redraw, rng: np.random.Generator
) -> tuple[np.ndarray, int]:
    """Evaluate on sample points, redrawing any that hit a singular set."""
    vals = spec.eval_array(pts)
    bad = ~np.isfinite(vals) | (vals <= 0.0)
    defects = int(bad.sum())
    rounds = 0
    while np.any(bad) and rounds < _RESAMPLE_ROUNDS:
        pts[bad] = redraw(rng, int(bad.sum()))
        vals[bad] = spec.eval_array(pts[bad])
        bad = ~np.isfinite(vals) | (vals <= 0.0)
        rounds += 1
    if np.any(bad):
        # Probability-zero pile-up; contribute nothing rather than crash.
        vals[bad] = 0.0
    return vals, defects


# ---------------------------------------------------------------------------
# Masses
# ---------------------------------------------------------------------------


def _mc_annulus_mass(spec: WeightSpec, annulus: DyadicAnnulus, quad: QuadratureConfig) -> MassEstimate:
    d = spec.d
    center = np.asarray(annulus.center, dtype=float)
    k_strata = quad.radial_strata
    n_per = max(2, quad.samples_per_region // k_strata)
    edges = annulus.r_inner * (annulus.r_outer / annulus.r_inner) ** (
        np.arange(k_strata + 1) / k_strata
    )
    total = 0.0
    var = 0.0
    n_total = 0
    defects = 0
    for k in range(k_strata):
        a, b = float(edges[k]), float(edges[k + 1])
        vol = ball_volume(d, b) - ball_volume(d, a)
        rng = substream(quad.seed, "annulus_mass", spec.descriptor()["kind"], annulus.key(), k)
        pts = annulus_points(rng, n_per, center, a, b)
        vals, dk = _eval_resampled(
            spec, pts, lambda r, m, a=a, b=b: annulus_points(r, m, center, a, b), rng
        )
        total += vol * float(vals.mean())
        var += (vol**2) * float(vals.var(ddof=1)) / n_per
        n_total += n_per
        defects += dk
    se = math.sqrt(var)
    target_met = total > 0 and se / total <= quad.relative_error_target
    return MassEstimate(total, se, n_total, STRATIFIED_MC, target_met, defects)


def annulus_mass(
    spec: WeightSpec,
    annulus: DyadicAnnulus,
    quad: QuadratureConfig,
    force_mc: bool = False,
) -> MassEstimate:
    """Estimate ``integral_{annulus} w dx``.

    Closed form for constant/power/profile weights on origin-centered annuli
    (and for genuinely constant weights anywhere); stratified Monte Carlo
    with log-spaced radial strata otherwise.
    """
    if spec.d < 2:
        raise DimensionMismatchError("annulus masses are defined on R^d with d >= 2")
    if annulus.d != spec.d:
        raise DimensionMismatchError("annulus and weight dimensions differ")
    if not force_mc:
        c = constant_value(spec)
        if c is not None:
            vol = ball_volume(spec.d, annulus.r_outer) - ball_volume(spec.d, annulus.r_inner)
            return MassEstimate(c * vol, 0.0, 0, CLOSED_FORM)
        if annulus.centered_at_origin:
            prof = origin_radial_profile(spec)
            if prof is not None:
                val = prof.shell_mass(spec.d, annulus.r_inner, annulus.r_outer)
                return MassEstimate(val, 0.0, 0, CLOSED_FORM)
    return _mc_annulus_mass(spec, annulus, quad)


def _mc_box_mass(spec: WeightSpec, box: Box, quad: QuadratureConfig) -> MassEstimate:
    lo = np.asarray(box.lo, dtype=float)
    hi = np.asarray(box.hi, dtype=float)
    k_strata = quad.radial_strata
    n_per = max(2, quad.samples_per_region // k_strata)
    # Slabs along the last axis: the implemented families vary vertically.
    cuts = np.linspace(lo[-1], hi[-1], k_strata + 1)
    slab_vol = box.volume() / k_strata
    total = 0.0
    var = 0.0
    defects = 0
    for k in range(k_strata):
        slab_lo = lo.copy()
        slab_hi = hi.copy()
        slab_lo[-1] = cuts[k]
        slab_hi[-1] = cuts[k + 1]
        rng = substream(quad.seed, "box_mass", spec.descriptor()["kind"], box.key(), k)
        pts = box_points(rng, n_per, slab_lo, slab_hi)
        vals, dk = _eval_resampled(
            spec, pts, lambda r, m, a=slab_lo, b=slab_hi: box_points(r, m, a, b), rng
        )
        total += slab_vol * float(vals.mean())
        var += (slab_vol**2) * float(vals.var(ddof=1)) / n_per
        defects += dk
    se = math.sqrt(var)
    target_met = total > 0 and se / total <= quad.relative_error_target
    return MassEstimate(total, se, k_strata * n_per, STRATIFIED_MC, target_met, defects)


def region_mass(
    spec: WeightSpec,
    region: Cube | Box,
    quad: QuadratureConfig,
    force_mc: bool = False,
) -> MassEstimate:
    """Estimate ``integral_region w dx`` over an axis-aligned cube or box."""
    box = as_box(region)
    if box.d != spec.d:
        raise DimensionMismatchError("region and weight dimensions differ")
    if not force_mc:
        c = constant_value(spec)
        if c is not None:
            return MassEstimate(c * box.volume(), 0.0, 0, CLOSED_FORM)
    return _mc_box_mass(spec, box, quad)


def ball_mass(
    spec: WeightSpec,
    center,
    radius: float,
    quad: QuadratureConfig,
    force_mc: bool = False,
) -> MassEstimate:
    """Estimate ``integral_{B(center, radius)} w dx``."""
    center = tuple(float(c) for c in np.asarray(center, dtype=float).reshape(-1))
    if len(center) != spec.d:
        raise DimensionMismatchError("ball center and weight dimensions differ")
    if not radius > 0:
        raise SpecValidationError("ball radius must be positive")
    d = spec.d
    if not force_mc:
        c = constant_value(spec)
        if c is not None:
            return MassEstimate(c * ball_volume(d, radius), 0.0, 0, CLOSED_FORM)
        if all(x == 0.0 for x in center):
            prof = origin_radial_profile(spec)
            if prof is not None:
                return MassEstimate(prof.shell_mass(d, 0.0, radius), 0.0, 0, CLOSED_FORM)
    # Equal-volume radial strata keep per-stratum variance comparable.
    k_strata = quad.radial_strata
    n_per = max(2, quad.samples_per_region // k_strata)
    edges = radius * (np.arange(k_strata + 1) / k_strata) ** (1.0 / d)
    ctr = np.asarray(center, dtype=float)
    total = 0.0
    var = 0.0
    defects = 0
    for k in range(k_strata):
        a, b = float(edges[k]), float(edges[k + 1])
        vol = ball_volume(d, b) - ball_volume(d, a)
        rng = substream(quad.seed, "ball_mass", spec.descriptor()["kind"], center, radius, k)
        pts = annulus_points(rng, n_per, ctr, a, b)
        vals, dk = _eval_resampled(
            spec, pts, lambda r, m, a=a, b=b: annulus_points(r, m, ctr, a, b), rng
        )
        total += vol * float(vals.mean())
        var += (vol**2) * float(vals.var(ddof=1)) / n_per
        defects += dk
    se = math.sqrt(var)
    target_met = total > 0 and se / total <= quad.relative_error_target
    return MassEstimate(total, se, k_strata * n_per, STRATIFIED_MC, target_met, defects)


def _mass_of(spec: WeightSpec, region, quad: QuadratureConfig, force_mc: bool = False) -> MassEstimate:
    if isinstance(region, DyadicAnnulus):
        return annulus_mass(spec, region, quad, force_mc=force_mc)
    return region_mass(spec, region, quad, force_mc=force_mc)


def _region_name(region) -> str:
    if isinstance(region, DyadicAnnulus):
        return f"annulus i={region.index} center={region.center}"
    box = as_box(region)
    return f"box lo={box.lo} hi={box.hi}"


def dual_mass(
    spec: WeightSpec,
    region,
    p: float,
    quad: QuadratureConfig,
    force_mc: bool = False,
) -> MassEstimate:
    """The mass raised to the power 1/(1-p), with first-order error.

    This is the convention ``w^s(A) = (integral_A w)^s`` applied with
    s = 1/(1-p); it is a power of the mass, not the integral of a power.
    """
    if not p > 1:
        raise SpecValidationError("dual mass is defined for p > 1")
    m = _mass_of(spec, region, quad, force_mc=force_mc)
    if m.value <= 0.0 or m.value < 2.0 * m.std_error:
        raise MassIndistinguishableFromZeroError(
            f"mass indistinguishable from zero on {_region_name(region)}"
        )
    s = 1.0 / (1.0 - p)
    value = m.value**s
    se = abs(s) * m.value ** (s - 1.0) * m.std_error
    return MassEstimate(value, se, m.n_samples, m.method, m.target_met, m.defects)


def inv_ess_sup(
    spec: WeightSpec,
    region,
    quad: QuadratureConfig,
    force_mc: bool = False,
) -> MassEstimate:
    """The reciprocal mass ``(integral_A w)^{-1}``: the p = 1 branch."""
    m = _mass_of(spec, region, quad, force_mc=force_mc)
    if m.value <= 0.0 or m.value < 2.0 * m.std_error:
        raise MassIndistinguishableFromZeroError(
            f"mass indistinguishable from zero on {_region_name(region)}"
        )
    value = 1.0 / m.value
    se = m.std_error / m.value**2
    return MassEstimate(value, se, m.n_samples, m.method, m.target_met, m.defects)
