"""Seeded sampling primitives.

Every Monte Carlo routine in the package draws from a substream derived from
``(seed, *key_parts)`` through a cryptographic digest, so results are
bit-identical for identical inputs, independent of call order and of any
internal batching.  Directions on the sphere are normalized standard Gaussian
vectors, which gives exact rotational invariance in every dimension.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def substream(seed: int, *key_parts) -> np.random.Generator:
    """Return a generator keyed by an arbitrary tuple of hashables.

    The key tuple is serialized through ``repr`` (floats round-trip exactly)
    and hashed, so two distinct keys collide with negligible probability and
    the mapping is stable across runs and platforms.
    """
    digest = hashlib.blake2b(repr(key_parts).encode("utf-8"), digest_size=16).digest()
    k1 = int.from_bytes(digest[:8], "little")
    k2 = int.from_bytes(digest[8:], "little")
    ss = np.random.SeedSequence(entropy=(int(seed) & _MASK64, k1, k2))
    return np.random.Generator(np.random.Philox(ss))


def unit_directions(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """Draw ``n`` uniform directions on the unit sphere in R^d."""
    v = rng.standard_normal((n, d))
    norms = np.linalg.norm(v, axis=1)
    # Degenerate draws are astronomically unlikely; redraw rather than divide by ~0.
    bad = norms < 1e-12
    while np.any(bad):
        v[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(v, axis=1)
        bad = norms < 1e-12
    return v / norms[:, None]


def annulus_points(
    rng: np.random.Generator,
    n: int,
    center: np.ndarray,
    r_inner: float,
    r_outer: float,
) -> np.ndarray:
    """Uniform points in the shell ``r_inner <= |x - center| < r_outer``.

    Radii use the inverse CDF of the r^{d-1} density, so the points are
    uniform with respect to Lebesgue measure.  ``r_inner = 0`` gives a ball.
    """
    center = np.asarray(center, dtype=float)
    d = center.shape[0]
    u = rng.random(n)
    radii = (r_inner**d + u * (r_outer**d - r_inner**d)) ** (1.0 / d)
    dirs = unit_directions(rng, n, d)
    return center[None, :] + radii[:, None] * dirs


def ball_points(rng: np.random.Generator, n: int, center: np.ndarray, radius: float) -> np.ndarray:
    """Uniform points in the ball ``|x - center| < radius``."""
    return annulus_points(rng, n, center, 0.0, radius)


def box_points(rng: np.random.Generator, n: int, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Uniform points in the axis-aligned box ``prod [lo_i, hi_i]``."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    return lo[None, :] + rng.random((n, lo.shape[0])) * (hi - lo)[None, :]
