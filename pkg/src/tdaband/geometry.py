"""Point clouds, Hausdorff distance, and the local mass-density estimator.

The statistical methods downstream all consume a finite sample of points in
Euclidean space. This module owns that representation, the Hausdorff
distance between samples, and the small-ball density estimator whose
infimum over the sample feeds the concentration and shells bands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ConfigError


@dataclass(frozen=True)
class PointCloud:
    """A finite multiset of points in D-dimensional Euclidean space.

    Attributes:
        points: Array of shape (n, D) with one point per row. Duplicate
            rows are allowed; the sample is a multiset.
    """

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise ConfigError(f"points must be a 2-D array, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ConfigError("a point cloud needs at least one point and one coordinate")
        if not np.isfinite(pts).all():
            raise ConfigError("point coordinates must be finite")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        """Number of sample points."""
        return int(self.points.shape[0])

    @property
    def ambient_dim(self) -> int:
        """Dimension D of the ambient Euclidean space."""
        return int(self.points.shape[1])

    def bounding_box(self) -> tuple[tuple[float, float], ...]:
        """Per-axis (min, max) over the sample."""
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return tuple((float(a), float(b)) for a, b in zip(lo, hi))

    def diameter(self) -> float:
        """Largest pairwise Euclidean distance in the sample."""
        if self.n == 1:
            return 0.0
        d = cdist(self.points, self.points)
        return float(d.max())

    def subset(self, indices: np.ndarray) -> "PointCloud":
        """The sub-cloud at the given row indices, in the given order."""
        return PointCloud(self.points[np.asarray(indices, dtype=np.intp)])

    def save_csv(self, path: str) -> None:
        """Write the cloud as UTF-8 CSV, one point per line, no header."""
        lines = [",".join(repr(float(c)) for c in row) for row in self.points]
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load_csv(cls, path: str) -> "PointCloud":
        """Read a headerless CSV of decimal coordinates, one point per line.

        Raises:
            ConfigError: if the file is empty or rows disagree on the
                number of coordinates.
        """
        rows: list[list[float]] = []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rows.append([float(tok) for tok in line.split(",")])
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: bad coordinate: {exc}") from exc
        if not rows:
            raise ConfigError(f"no points in {path!r}")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ConfigError(f"inconsistent column count in {path!r}")
        return cls(np.array(rows, dtype=np.float64))


@dataclass(frozen=True)
class DensityParams:
    """Parameters of the small-ball density estimator.

    Attributes:
        intrinsic_dim: The dimension d of the underlying support, assumed
            known. Must satisfy 1 <= d <= ambient dimension wherever used.
        radius: The ball diameter parameter r_n. Balls of radius
            ``radius / 2`` are used, and counts are normalized by
            ``radius ** intrinsic_dim``.
    """

    intrinsic_dim: int
    radius: float

    def __post_init__(self) -> None:
        if int(self.intrinsic_dim) != self.intrinsic_dim or self.intrinsic_dim < 1:
            raise ConfigError(f"intrinsic_dim must be a positive integer, got {self.intrinsic_dim}")
        if not (self.radius > 0) or not math.isfinite(self.radius):
            raise ConfigError(f"radius must be a positive real, got {self.radius}")
        object.__setattr__(self, "intrinsic_dim", int(self.intrinsic_dim))
        object.__setattr__(self, "radius", float(self.radius))


def hausdorff(a: PointCloud, b: PointCloud) -> float:
    """Hausdorff distance between two point clouds.

    Args:
        a: First cloud.
        b: Second cloud with the same ambient dimension.

    Returns:
        The maximum over both clouds of the Euclidean distance from a
        point to the closest point of the other cloud. Zero exactly when
        the clouds are equal as sets.

    Raises:
        ConfigError: on ambient dimension mismatch.
    """
    if a.ambient_dim != b.ambient_dim:
        raise ConfigError(
            f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}"
        )
    d = cdist(a.points, b.points)
    forward = d.min(axis=1).max()
    backward = d.min(axis=0).max()
    return float(max(forward, backward))


def local_density(cloud: PointCloud, x: np.ndarray, params: DensityParams) -> float:
    """Small-ball density estimate at a query point.

    Counts the fraction of sample points within Euclidean distance
    ``params.radius / 2`` of ``x`` (boundary inclusive) and divides by
    ``params.radius ** params.intrinsic_dim``.

    Args:
        cloud: The sample.
        x: Query point with the cloud's ambient dimension.
        params: Intrinsic dimension and ball parameter.

    Returns:
        The normalized small-ball mass, a non-negative real.
    """
    q = np.asarray(x, dtype=np.float64).reshape(-1)
    if q.shape[0] != cloud.ambient_dim:
        raise ConfigError(
            f"query point has {q.shape[0]} coordinates, cloud is {cloud.ambient_dim}-dimensional"
        )
    r_half = params.radius / 2.0
    dist = np.sqrt(((cloud.points - q) ** 2).sum(axis=1))
    count = int((dist <= r_half).sum())
    return count / cloud.n / params.radius**params.intrinsic_dim


def rho_hat(cloud: PointCloud, params: DensityParams) -> float:
    """Minimum of the local density over the sample points themselves.

    Every sample point counts itself, so the result is always at least
    ``1 / (n * radius ** d)``.

    Args:
        cloud: The sample.
        params: Intrinsic dimension and ball parameter.

    Returns:
        ``min_i local_density(cloud, X_i, params)``.
    """
    r_half = params.radius / 2.0
    d = cdist(cloud.points, cloud.points)
    counts = (d <= r_half).sum(axis=1)
    min_count = int(counts.min())
    return min_count / cloud.n / params.radius**params.intrinsic_dim


def default_rn(n: int, d: int) -> float:
    """Default ball parameter ``(ln n / n) ** (1 / (d + 2))``.

    The rate is fixed by theory only up to a constant; this realization
    uses constant 1 and the natural logarithm, and every consumer accepts
    an explicit override.

    Args:
        n: Sample size, at least 2.
        d: Intrinsic dimension, at least 1.

    Returns:
        The default radius, a positive real below 1 for n >= 3.

    Raises:
        ConfigError: if n < 2 or d < 1.
    """
    if n < 2:
        raise ConfigError(f"default_rn needs n >= 2, got {n}")
    if d < 1:
        raise ConfigError(f"intrinsic dimension must be >= 1, got {d}")
    return (math.log(n) / n) ** (1.0 / (d + 2))
