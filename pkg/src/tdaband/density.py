"""Kernel density estimation on grids and its three confidence bands.

The estimand is the smoothed density p_h, so the bands here bound the
sup-norm error of the kernel estimate on the evaluation grid: a Hoeffding
bound over the continuous box, a finite-grid union bound, and a bootstrap
of the sup deviation. By diagram stability, a sup-norm band is also a
bottleneck band for the density diagram.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.spatial.distance import cdist

from ._grid import GridField
from .complexes import lower_star_filtration
from .errors import ConfigError, SolverError
from .geometry import PointCloud
from .persistence import PersistenceDiagram, PersistencePair, reduce

__all__ = [
    "GridField",
    "KernelSpec",
    "kde",
    "default_grid",
    "hoeffding_band",
    "grid_band",
    "bootstrap_band",
    "density_diagram",
]

_KINDS = ("gaussian", "epanechnikov-smoothed", "triangular")


@dataclass(frozen=True)
class KernelSpec:
    """A radial kernel with its bandwidth and smoothness constants.

    Attributes:
        kind: One of gaussian, epanechnikov-smoothed, triangular.
        bandwidth: The bandwidth h.
        dim: Ambient dimension D the kernel normalizes over.
        k0: The kernel's maximum K(0), attained at the origin.
        lipschitz: A Lipschitz constant L of K on R^D.
    """

    kind: str
    bandwidth: float
    dim: int
    k0: float
    lipschitz: float

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ConfigError(f"unknown kernel kind {self.kind!r}")
        if not (self.bandwidth > 0):
            raise ConfigError(f"bandwidth must be positive, got {self.bandwidth}")
        if self.dim < 1:
            raise ConfigError(f"kernel dimension must be >= 1, got {self.dim}")

    @classmethod
    def make(cls, kind: str, bandwidth: float, dim: int) -> "KernelSpec":
        """Build a kernel with analytically derived K(0) and L.

        The compact kernels use the radial profiles (1 - r^2)+ and
        (1 - r)+ normalized to integrate to 1 over R^dim; the Gaussian is
        the standard normal density in R^dim.
        """
        d = int(dim)
        if d < 1:
            raise ConfigError(f"kernel dimension must be >= 1, got {dim}")
        if kind == "gaussian":
            k0 = (2.0 * math.pi) ** (-d / 2.0)
            lip = k0 * math.exp(-0.5)
        elif kind == "epanechnikov-smoothed":
            # c * (1 - r^2)+ with c = D (D + 2) Gamma(D / 2) / (4 pi^{D/2}).
            c = d * (d + 2) * math.gamma(d / 2.0) / (4.0 * math.pi ** (d / 2.0))
            k0 = c
            lip = 2.0 * c
        elif kind == "triangular":
            # c * (1 - r)+ with c = D (D + 1) Gamma(D / 2) / (2 pi^{D/2}).
            c = d * (d + 1) * math.gamma(d / 2.0) / (2.0 * math.pi ** (d / 2.0))
            k0 = c
            lip = c
        else:
            raise ConfigError(f"unknown kernel kind {kind!r}")
        return cls(kind, float(bandwidth), d, k0, lip)

    def profile(self, r: np.ndarray) -> np.ndarray:
        """Kernel value at radial distance r (unscaled by the bandwidth)."""
        r = np.asarray(r, dtype=np.float64)
        if self.kind == "gaussian":
            return self.k0 * np.exp(-0.5 * r * r)
        if self.kind == "epanechnikov-smoothed":
            return self.k0 * np.clip(1.0 - r * r, 0.0, None)
        return self.k0 * np.clip(1.0 - r, 0.0, None)


def default_grid(
    cloud: PointCloud, kernel: KernelSpec, resolution: int = 64
) -> GridField:
    """Evaluation grid: the data bounding box inflated by 3h per side."""
    pad = 3.0 * kernel.bandwidth
    box = tuple((lo - pad, hi + pad) for lo, hi in cloud.bounding_box())
    return GridField.geometry(box, (int(resolution),) * cloud.ambient_dim)


def _kernel_matrix(cloud: PointCloud, kernel: KernelSpec, grid: GridField) -> np.ndarray:
    """Matrix M[g, i] = K(|x_g - X_i| / h) / h^D over grid vertices and points."""
    if grid.ndim != cloud.ambient_dim:
        raise ConfigError(
            f"grid dimension {grid.ndim} does not match cloud dimension {cloud.ambient_dim}"
        )
    h = kernel.bandwidth
    pts = grid.grid_points()
    out = np.empty((pts.shape[0], cloud.n), dtype=np.float64)
    # Chunk the grid axis to bound peak memory on fine grids.
    step = max(1, int(2**22 // max(1, cloud.n)))
    for start in range(0, pts.shape[0], step):
        block = pts[start : start + step]
        out[start : start + block.shape[0]] = kernel.profile(
            cdist(block, cloud.points) / h
        )
    out /= h**cloud.ambient_dim
    return out


def kde(cloud: PointCloud, kernel: KernelSpec, grid: GridField) -> GridField:
    """Kernel density estimate of the sample on the grid's vertices.

    Only the grid's geometry is read; its values are ignored.
    """
    m = _kernel_matrix(cloud, kernel, grid)
    values = m.mean(axis=1).reshape(grid.resolution)
    return grid.with_values(values)


def hoeffding_band(
    n: int, kernel: KernelSpec, domain_half_width: float, dim: int, alpha: float
) -> float:
    """Sup-norm band over the whole box from Hoeffding's inequality.

    Solves ``2 (4 C L sqrt(D) / (delta h^{D+1}))^D
    exp(-n delta^2 h^{2D} / (2 K(0)^2)) = alpha`` for delta. The left side
    is strictly decreasing, so the root is unique.

    Raises:
        SolverError: if no bracket with a sign change can be found.
    """
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    if n < 1 or domain_half_width <= 0 or dim < 1:
        raise ConfigError("hoeffding_band needs n >= 1, C > 0, D >= 1")
    h = kernel.bandwidth
    big_d = int(dim)
    coef = 4.0 * domain_half_width * kernel.lipschitz * math.sqrt(big_d) / h ** (big_d + 1)
    rate = n * h ** (2 * big_d) / (2.0 * kernel.k0**2)

    def log_lhs_minus_log_alpha(log_delta: float) -> float:
        delta = math.exp(log_delta)
        return (
            math.log(2.0)
            + big_d * (math.log(coef) - log_delta)
            - rate * delta * delta
            - math.log(alpha)
        )

    lo = math.log(1e-12)
    if log_lhs_minus_log_alpha(lo) < 0:
        raise SolverError("hoeffding_band: left side below alpha at delta = 1e-12")
    hi = 0.0
    for _ in range(200):
        if log_lhs_minus_log_alpha(hi) < 0:
            break
        hi += 1.0
    else:
        raise SolverError("hoeffding_band: no sign change up to delta = exp(200)")
    root = brentq(log_lhs_minus_log_alpha, lo, hi, xtol=1e-15, rtol=8.9e-16)
    return float(math.exp(root))


def grid_band(n: int, kernel: KernelSpec, grid_size: int, alpha: float) -> float:
    """Finite-grid union-bound band ``(K(0)/h)^D sqrt(log(2N/alpha) / (2n))``.

    Degenerate alpha values up to 2N are evaluated as written, so
    alpha = 2N gives exactly 0.
    """
    if not (alpha > 0):
        raise ConfigError(f"alpha must be positive, got {alpha}")
    if n < 1 or grid_size < 1:
        raise ConfigError("grid_band needs n >= 1 and a nonempty grid")
    log_term = math.log(2.0 * grid_size / alpha)
    if log_term < 0:
        raise ConfigError(f"alpha = {alpha} exceeds 2N = {2 * grid_size}")
    return (kernel.k0 / kernel.bandwidth) ** kernel.dim * math.sqrt(
        log_term / (2.0 * n)
    )


def bootstrap_band(
    cloud: PointCloud,
    kernel: KernelSpec,
    grid: GridField,
    alpha: float,
    replicates: int = 300,
    seed: int = 0,
) -> float:
    """Bootstrap band for the sup distance between the KDE and its target.

    Each replicate resamples the cloud with replacement, recomputes the
    KDE on the same grid, and records the scaled sup deviation
    ``T_j = sqrt(n h^D) * sup |kde_j - kde|``. The band is the empirical
    (1 - alpha) quantile of T divided by sqrt(n h^D). Replicate j draws
    from sub-stream j of the seed, so results do not depend on execution
    order.
    """
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    if replicates < 1:
        raise ConfigError(f"replicates must be >= 1, got {replicates}")
    n = cloud.n
    m = _kernel_matrix(cloud, kernel, grid)
    base = m.mean(axis=1)
    scale = math.sqrt(n * kernel.bandwidth**cloud.ambient_dim)
    streams = np.random.SeedSequence(seed).spawn(replicates)
    stats = np.empty(replicates, dtype=np.float64)
    weights = np.full(n, 1.0 / n)
    for j in range(replicates):
        rng = np.random.default_rng(streams[j])
        counts = rng.multinomial(n, weights).astype(np.float64)
        resampled = m @ counts / n
        stats[j] = scale * float(np.abs(resampled - base).max())
    stats.sort()
    index = max(0, math.ceil((1.0 - alpha) * replicates) - 1)
    return float(stats[index] / scale)


def density_diagram(fld: GridField) -> PersistenceDiagram:
    """Upper-level-set persistence diagram of a density field.

    The field is negated, filtered by lower stars, and reduced; births
    and deaths are reported back in density units, so births are the
    larger values. The essential class of each connected component of the
    grid is reported with death capped at density 0 and the essential
    flag set.
    """
    filtration = lower_star_filtration(fld, negate=True)
    raw = reduce(filtration)
    pairs = []
    for p in raw.pairs:
        if p.essential:
            pairs.append(PersistencePair(p.dim, -p.birth, 0.0, essential=True))
        else:
            pairs.append(PersistencePair(p.dim, -p.birth, -p.death))
    return PersistenceDiagram(pairs, orientation="upper")
