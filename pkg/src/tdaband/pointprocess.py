"""Diagrams as point processes: cell counts and bootstrap count intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._grid import GridField
from .density import KernelSpec, _kernel_matrix, density_diagram
from .errors import ConfigError
from .geometry import PointCloud
from .persistence import PersistenceDiagram

_GEOMETRIES = ("euclidean", "persistence")


@dataclass(frozen=True)
class SmoothedDiagram:
    """Counts of finite diagram points over a square grid of plane cells."""

    w: float
    window: tuple[tuple[float, float], tuple[float, float]]
    counts: np.ndarray

    def total(self) -> int:
        return int(self.counts.sum())

    def save_csv(self, path: str) -> None:
        (x_lo, x_hi), (y_lo, y_hi) = self.window
        header = f"{self.w!r};{x_lo!r},{x_hi!r};{y_lo!r},{y_hi!r}"
        lines = [header]
        for row in self.counts:
            lines.append(",".join(str(int(c)) for c in row))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


def smooth_diagram(
    diagram: PersistenceDiagram,
    w: float,
    window: tuple[tuple[float, float], tuple[float, float]] | None = None,
) -> SmoothedDiagram:
    """Histogram the finite pairs of a diagram over cells of side w.

    Cells follow the half-open convention [lo, hi) on both axes. With no
    window given, the finite pairs' bounding box inflated by 10% is used.
    """
    if not (w > 0):
        raise ConfigError(f"cell side must be positive, got {w}")
    finite = [(p.birth, p.death) for p in diagram.finite_pairs()]
    pts = np.array(finite, dtype=np.float64).reshape(-1, 2)
    if window is None:
        if pts.shape[0] == 0:
            window = ((0.0, w), (0.0, w))
        else:
            window = tuple(
                (lo - 0.05 * max(hi - lo, w), hi + 0.05 * max(hi - lo, w))
                for lo, hi in zip(pts.min(axis=0), pts.max(axis=0))
            )
    (x_lo, x_hi), (y_lo, y_hi) = window
    if not (x_lo < x_hi and y_lo < y_hi):
        raise ConfigError(f"degenerate window {window}")
    nx = max(1, math.ceil((x_hi - x_lo) / w))
    ny = max(1, math.ceil((y_hi - y_lo) / w))
    counts = np.zeros((nx, ny), dtype=np.int64)
    for bx, by in pts:
        ix = math.floor((bx - x_lo) / w)
        iy = math.floor((by - y_lo) / w)
        if 0 <= ix < nx and 0 <= iy < ny and bx < x_hi and by < y_hi:
            counts[ix, iy] += 1
    return SmoothedDiagram(w=float(w), window=((float(x_lo), float(x_hi)), (float(y_lo), float(y_hi))), counts=counts)


def count_beyond(
    diagram: PersistenceDiagram, threshold: float, geometry: str = "euclidean"
) -> int:
    """Number of diagram points farther than ``threshold`` from the diagonal.

    With the default Euclidean geometry the distance of (b, d) to the
    diagonal is |d - b| / sqrt(2); with geometry "persistence" it is the
    lifetime |d - b| itself. Essential classes participate through their
    lifetime: infinite when the death is uncapped, the capped value
    otherwise.
    """
    if threshold < 0:
        raise ConfigError(f"threshold must be non-negative, got {threshold}")
    if geometry not in _GEOMETRIES:
        raise ConfigError(f"unknown geometry {geometry!r}")
    scale = math.sqrt(2.0) if geometry == "euclidean" else 1.0
    count = 0
    for pair in diagram.pairs:
        if pair.persistence / scale > threshold:
            count += 1
    return count


def bootstrap_count_ci(
    cloud: PointCloud,
    kernel: KernelSpec,
    grid: GridField,
    threshold: float,
    alpha: float,
    replicates: int = 300,
    seed: int = 0,
    geometry: str = "euclidean",
) -> tuple[int, int]:
    """Bootstrap confidence interval for the significant-feature count.

    Each replicate resamples the cloud with replacement, rebuilds the
    density diagram on the same grid, and counts points beyond the
    threshold. Returns the empirical (alpha/2, 1 - alpha/2) quantiles of
    those counts as integers.
    """
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    if replicates < 1:
        raise ConfigError(f"replicates must be >= 1, got {replicates}")
    n = cloud.n
    m = _kernel_matrix(cloud, kernel, grid)
    streams = np.random.SeedSequence(seed).spawn(replicates)
    weights = np.full(n, 1.0 / n)
    counts = np.empty(replicates, dtype=np.int64)
    for j in range(replicates):
        rng = np.random.default_rng(streams[j])
        draw = rng.multinomial(n, weights).astype(np.float64)
        fld = grid.with_values((m @ draw / n).reshape(grid.resolution))
        counts[j] = count_beyond(density_diagram(fld), threshold, geometry)
    counts.sort()
    lo_idx = max(0, math.ceil(alpha / 2.0 * replicates) - 1)
    hi_idx = max(0, math.ceil((1.0 - alpha / 2.0) * replicates) - 1)
    return int(counts[lo_idx]), int(counts[hi_idx])
