"""Seeded synthetic generators for the experiment distributions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import norm

from .errors import ConfigError
from .geometry import PointCloud

GENERATOR_KINDS = (
    "uniform_circle",
    "truncated_normal_circle",
    "eyeglasses",
    "bart_simpson",
    "with_outliers",
)

# Mixture of the spiky test density: half standard normal, plus five
# narrow bumps of weight 1/10 at -1, -0.5, 0, 0.5, 1 with sd 1/10.
_SPIKE_MEANS = tuple(j / 2.0 - 1.0 for j in range(5))
_SPIKE_SD = 0.1


@dataclass(frozen=True)
class GeneratorSpec:
    """Which distribution to sample, how many points, and with what seed.

    For ``with_outliers`` the wrapper's ``n`` must equal
    ``inner.n + outlier_count``; the inner spec's own seed is ignored and
    the wrapper's seed drives the whole draw. ``outlier_box`` of None
    means the inner sample's bounding box inflated by 50% per axis.
    """

    kind: str
    n: int
    seed: int
    radius: float = 1.0
    sigma: float = 1.0
    separation: float = 0.9
    inner: Optional["GeneratorSpec"] = None
    outlier_count: int = 0
    outlier_box: Optional[tuple[tuple[float, float], ...]] = None

    def __post_init__(self) -> None:
        if self.kind not in GENERATOR_KINDS:
            raise ConfigError(f"unknown generator kind {self.kind!r}")
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.radius <= 0:
            raise ConfigError(f"radius must be positive, got {self.radius}")
        if self.sigma <= 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if not (0.0 < self.separation < 1.0):
            raise ConfigError(
                f"eyeglasses separation must be in (0, 1), got {self.separation}"
            )
        if self.kind == "with_outliers":
            if self.inner is None:
                raise ConfigError("with_outliers needs an inner spec")
            if self.outlier_count < 1:
                raise ConfigError("with_outliers needs outlier_count >= 1")
            if self.n != self.inner.n + self.outlier_count:
                raise ConfigError(
                    f"with_outliers n must be inner.n + outlier_count = "
                    f"{self.inner.n + self.outlier_count}, got {self.n}"
                )


def with_outliers(
    inner: GeneratorSpec,
    outlier_count: int,
    seed: int,
    outlier_box: Optional[tuple[tuple[float, float], ...]] = None,
) -> GeneratorSpec:
    """Convenience wrapper building a with_outliers spec around an inner one."""
    return GeneratorSpec(
        kind="with_outliers",
        n=inner.n + outlier_count,
        seed=seed,
        inner=inner,
        outlier_count=outlier_count,
        outlier_box=outlier_box,
    )


def bart_simpson_pdf(x) -> np.ndarray:
    """The spiky mixture density: 0.5 N(0,1) plus five N(j/2 - 1, 0.1^2) / 10."""
    x = np.asarray(x, dtype=np.float64)
    out = 0.5 * norm.pdf(x, loc=0.0, scale=1.0)
    for mean in _SPIKE_MEANS:
        out = out + 0.1 * norm.pdf(x, loc=mean, scale=_SPIKE_SD)
    return out


def _sample_circle(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    theta = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return radius * np.stack([np.cos(theta), np.sin(theta)], axis=1)


def _sample_truncated_normal_circle(
    rng: np.random.Generator, n: int, radius: float, sigma: float
) -> np.ndarray:
    # Angle theta has density proportional to exp(-theta^2 / (2 sigma^2))
    # on (-pi, pi]; inverse-CDF sampling keeps the draw deterministic.
    u_lo = norm.cdf(-math.pi / sigma)
    u_hi = norm.cdf(math.pi / sigma)
    u = rng.uniform(u_lo, u_hi, size=n)
    theta = sigma * norm.ppf(u)
    return radius * np.stack([np.cos(theta), np.sin(theta)], axis=1)


def _sample_eyeglasses(rng: np.random.Generator, n: int, separation: float) -> np.ndarray:
    # Two unit circles centered at (-separation, 0) and (separation, 0).
    # Each circle keeps only the arc outside the other circle; the two
    # kept arcs meet at (0, +-sqrt(1 - separation^2)) and form the outer
    # boundary of the glued figure. Sampling is uniform in arc length.
    a = math.acos(separation)
    arc = 2.0 * math.pi - 2.0 * a
    s = rng.uniform(0.0, 2.0 * arc, size=n)
    pts = np.empty((n, 2), dtype=np.float64)
    left = s < arc
    phi_left = a + s[left]
    pts[left, 0] = -separation + np.cos(phi_left)
    pts[left, 1] = np.sin(phi_left)
    phi_right = (a - math.pi) + (s[~left] - arc)
    pts[~left, 0] = separation + np.cos(phi_right)
    pts[~left, 1] = np.sin(phi_right)
    return pts


def _sample_bart_simpson(rng: np.random.Generator, n: int) -> np.ndarray:
    weights = np.array([0.5] + [0.1] * 5)
    means = np.array([0.0] + list(_SPIKE_MEANS))
    sds = np.array([1.0] + [_SPIKE_SD] * 5)
    comp = rng.choice(6, size=n, p=weights)
    x = rng.standard_normal(n) * sds[comp] + means[comp]
    return x.reshape(-1, 1)


def _inflate_box(
    box: tuple[tuple[float, float], ...], factor: float
) -> tuple[tuple[float, float], ...]:
    out = []
    for lo, hi in box:
        center = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo) * factor
        out.append((center - half, center + half))
    return tuple(out)


def _generate_with_rng(spec: GeneratorSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.kind == "uniform_circle":
        return _sample_circle(rng, spec.n, spec.radius)
    if spec.kind == "truncated_normal_circle":
        return _sample_truncated_normal_circle(rng, spec.n, spec.radius, spec.sigma)
    if spec.kind == "eyeglasses":
        return _sample_eyeglasses(rng, spec.n, spec.separation)
    if spec.kind == "bart_simpson":
        return _sample_bart_simpson(rng, spec.n)
    if spec.kind == "with_outliers":
        inner = _generate_with_rng(spec.inner, rng)
        box = spec.outlier_box
        if box is None:
            bounds = tuple(
                (float(lo), float(hi)) for lo, hi in zip(inner.min(axis=0), inner.max(axis=0))
            )
            box = _inflate_box(bounds, 1.5)
        lows = np.array([lo for lo, _ in box])
        highs = np.array([hi for _, hi in box])
        outliers = rng.uniform(lows, highs, size=(spec.outlier_count, len(box)))
        return np.concatenate([inner, outliers], axis=0)
    raise ConfigError(f"unknown generator kind {spec.kind!r}")


def generate(spec: GeneratorSpec) -> PointCloud:
    """Draw the configured sample, deterministically in the configured seed."""
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    return PointCloud(_generate_with_rng(spec, rng))
