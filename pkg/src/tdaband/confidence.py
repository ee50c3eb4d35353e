"""Distance-based confidence bands: subsampling, concentration, shells.

Each method produces a half-width c such that, with probability at least
1 - alpha, the bottleneck distance between the sample diagram and the
true diagram is at most c. Diagram points closer than c to the diagonal
are then indistinguishable from sampling noise at that level.

Subsampling estimates the Hausdorff fluctuation empirically. The
concentration method solves a small-ball tail bound whose only unknown is
the minimum local density. The shells method refines it by integrating
the same tail bound against an estimated density of local densities,
which pays off precisely when the sampling density varies around the
support.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.spatial.distance import cdist

from .errors import ConfigError, SolverError
from .geometry import DensityParams, PointCloud, default_rn, hausdorff
from .persistence import PersistenceDiagram, PersistencePair

_METHODS = (
    "subsample",
    "concentration",
    "concentration_split",
    "shells",
    "conservative",
    "density_hoeffding",
    "density_grid",
    "density_bootstrap",
)


@dataclass(frozen=True)
class BandResult:
    """A confidence band: method tag, nominal level, and half-width c."""

    method: str
    alpha: float
    c: float
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise ConfigError(f"unknown band method {self.method!r}")
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        if not (self.c >= 0.0):
            raise ConfigError(f"band half-width must be >= 0, got {self.c}")

    def to_json(self) -> str:
        payload = {
            "method": self.method,
            "alpha": self.alpha,
            "c": self.c,
            "diagnostics": dict(sorted(self.diagnostics.items())),
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BandResult":
        raw = json.loads(text)
        try:
            return cls(
                method=raw["method"],
                alpha=float(raw["alpha"]),
                c=float(raw["c"]),
                diagnostics=dict(raw.get("diagnostics", {})),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed band JSON: {exc}") from exc


@dataclass(frozen=True)
class ShellDensityEstimate:
    """A one-dimensional KDE of the sample's local densities.

    Attributes:
        grid: Evaluation points over the local-density axis v.
        values: Estimated density g at the grid points.
        bandwidth: The (one-dimensional, Gaussian) smoothing bandwidth.
        rho_lower: The lower integration endpoint, the minimum observed
            local density.
        sample_densities: The raw local densities V_i behind the estimate.
    """

    grid: np.ndarray
    values: np.ndarray
    bandwidth: float
    rho_lower: float
    sample_densities: np.ndarray

    def evaluate(self, v: np.ndarray) -> np.ndarray:
        """Exact mixture evaluation of g at arbitrary points."""
        return _gaussian_mixture_1d(v, self.sample_densities, self.bandwidth)


def _gaussian_mixture_1d(v: np.ndarray, centers: np.ndarray, bandwidth: float) -> np.ndarray:
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    z = (v[:, None] - centers[None, :]) / bandwidth
    bumps = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    return bumps.mean(axis=1) / bandwidth


def _quantile_upper(values: np.ndarray, q: float) -> float:
    """Smallest observed t with #{values > t} / len <= 1 - q."""
    ordered = np.sort(values)
    index = max(0, math.ceil(q * ordered.shape[0]) - 1)
    return float(ordered[index])


def default_subsample_size(n: int) -> int:
    """Canonical subsample size ceil(n / ln(n)^2), at least 1 and below n."""
    if n < 2:
        raise ConfigError(f"need n >= 2 to subsample, got {n}")
    return min(n - 1, max(1, math.ceil(n / math.log(n) ** 2)))


def subsample_band(
    cloud: PointCloud, b: int, reps: int, alpha: float, seed: int = 0
) -> BandResult:
    """Method I: subsampling band.

    Draws ``reps`` subsamples of size ``b`` without replacement, records
    the Hausdorff distance from each subsample to the full sample, and
    returns twice the empirical upper (1 - alpha) quantile.
    """
    if not (1 <= b < cloud.n):
        raise ConfigError(f"subsample size must satisfy 1 <= b < n, got b={b}, n={cloud.n}")
    if reps < 1:
        raise ConfigError(f"reps must be >= 1, got {reps}")
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    streams = np.random.SeedSequence(seed).spawn(reps)
    stats = np.empty(reps, dtype=np.float64)
    for j in range(reps):
        rng = np.random.default_rng(streams[j])
        idx = rng.choice(cloud.n, size=b, replace=False)
        stats[j] = hausdorff(cloud.subset(idx), cloud)
    t_alpha = _quantile_upper(stats, 1.0 - alpha)
    return BandResult(
        method="subsample",
        alpha=alpha,
        c=2.0 * t_alpha,
        diagnostics={"b": float(b), "reps": float(reps), "t_alpha": t_alpha, "seed": float(seed)},
    )


def lambert_solve(rho: float, n: int, d: int, alpha: float, t_max: float | None = None) -> float:
    """Solve ``2^{d+1} / (t^d rho) exp(-n rho t^d / 2) = alpha`` for t.

    The left side is strictly decreasing in t, so the root on the
    decreasing branch is unique. The solve runs in log-t space.

    Raises:
        SolverError: if the bracket [1e-8, t_max] contains no sign change.
    """
    if not (rho > 0) or n < 1 or d < 1:
        raise ConfigError("lambert_solve needs rho > 0, n >= 1, d >= 1")
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")

    def log_lhs_minus_log_alpha(log_t: float) -> float:
        s = math.exp(log_t * d)
        return (
            (d + 1) * math.log(2.0)
            - math.log(s)
            - math.log(rho)
            - 0.5 * n * rho * s
            - math.log(alpha)
        )

    lo = math.log(1e-8)
    if log_lhs_minus_log_alpha(lo) < 0:
        raise SolverError(f"lambert_solve: left side already below alpha at t=1e-8 (rho={rho}, n={n})")
    if t_max is not None:
        hi = math.log(t_max)
        if log_lhs_minus_log_alpha(hi) > 0:
            raise SolverError(
                f"lambert_solve: no root below t_max={t_max} (rho={rho}, n={n}, alpha={alpha})"
            )
    else:
        hi = 0.0
        for _ in range(200):
            if log_lhs_minus_log_alpha(hi) < 0:
                break
            hi += 1.0
        else:
            raise SolverError("lambert_solve: no sign change found while expanding the bracket")
    root = brentq(log_lhs_minus_log_alpha, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    return float(math.exp(root))


def _split_indices(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    if n % 2 != 0:
        raise ConfigError(f"split variants need an even sample size, got n={n}")
    perm = np.random.default_rng(np.random.SeedSequence(seed)).permutation(n)
    return perm[: n // 2], perm[n // 2 :]


def _local_densities(cloud: PointCloud, params: DensityParams) -> np.ndarray:
    """Vector of local densities at every sample point, boundary inclusive."""
    dist = cdist(cloud.points, cloud.points)
    counts = (dist <= params.radius / 2.0).sum(axis=1)
    return counts / cloud.n / params.radius**params.intrinsic_dim


def concentration_band(
    cloud: PointCloud,
    params: DensityParams,
    alpha: float,
    split: bool = False,
    seed: int = 0,
) -> BandResult:
    """Method II: concentration band from the small-ball tail bound.

    Without splitting, the minimum local density is estimated on the full
    sample and plugged into the tail equation with the full n. With
    splitting, the estimate comes from a random half and the equation is
    solved with the other half's size; the band then applies to the
    diagram of that second half.
    """
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    diag: dict = {"r_n": params.radius, "d": float(params.intrinsic_dim)}
    if split:
        est_idx, use_idx = _split_indices(cloud.n, seed)
        est_cloud = cloud.subset(est_idx)
        rho = float(_local_densities(est_cloud, params).min())
        n_solve = use_idx.shape[0]
        diag.update({"split": "estimate-first-half", "seed": float(seed), "n_solve": float(n_solve)})
        method = "concentration_split"
        t_cap = cloud.diameter()
    else:
        rho = float(_local_densities(cloud, params).min())
        n_solve = cloud.n
        diag["split"] = "none"
        method = "concentration"
        t_cap = cloud.diameter()
    t = lambert_solve(rho, n_solve, params.intrinsic_dim, alpha, t_max=max(t_cap, 1e-6))
    diag["rho_hat"] = rho
    return BandResult(method=method, alpha=alpha, c=t, diagnostics=diag)


def conservative_t(n: int, rho: float, d: int, alpha: float) -> float:
    """Closed form ``((2 / (n rho)) log(n / alpha))^{1/d}``.

    Degenerate alpha values up to n evaluate as written, so alpha = n
    gives exactly 0.
    """
    if not (alpha > 0):
        raise ConfigError(f"alpha must be positive, got {alpha}")
    if not (rho > 0) or n < 1 or d < 1:
        raise ConfigError("conservative_t needs rho > 0, n >= 1, d >= 1")
    log_term = math.log(n / alpha)
    if log_term < 0:
        raise ConfigError(f"alpha = {alpha} exceeds n = {n}")
    return (2.0 / (n * rho) * log_term) ** (1.0 / d)


def conservative_band(cloud: PointCloud, params: DensityParams, alpha: float) -> BandResult:
    """Closed-form conservative band, always at least as wide as concentration."""
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    rho = float(_local_densities(cloud, params).min())
    t = conservative_t(cloud.n, rho, params.intrinsic_dim, alpha)
    return BandResult(
        method="conservative",
        alpha=alpha,
        c=t,
        diagnostics={"rho_hat": rho, "r_n": params.radius, "d": float(params.intrinsic_dim)},
    )


def shell_g_hat(
    cloud: PointCloud, params: DensityParams, b_shell: float | None = None
) -> ShellDensityEstimate:
    """Gaussian KDE of the local densities V_i = local_density(X_i).

    The default bandwidth is ``default_rn(n, d) ** 0.25``.
    """
    if b_shell is None:
        b_shell = default_rn(cloud.n, params.intrinsic_dim) ** 0.25
    if not (b_shell > 0):
        raise ConfigError(f"b_shell must be positive, got {b_shell}")
    dens = _local_densities(cloud, params)
    lo = float(dens.min() - 5.0 * b_shell)
    hi = float(dens.max() + 5.0 * b_shell)
    grid = np.linspace(lo, hi, 512)
    return ShellDensityEstimate(
        grid=grid,
        values=_gaussian_mixture_1d(grid, dens, float(b_shell)),
        bandwidth=float(b_shell),
        rho_lower=float(dens.min()),
        sample_densities=dens,
    )


def _shell_quadrature(estimate: ShellDensityEstimate) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights over log-spaced panels of the shell integral.

    The integrand lives on [rho_lower, max V + 10 b]; panels are log
    spaced because the 1/v factor concentrates mass near the lower end.
    """
    lo = estimate.rho_lower
    hi = float(estimate.sample_densities.max() + 10.0 * estimate.bandwidth)
    if not (lo > 0):
        raise SolverError("shells integral needs a positive lower endpoint")
    if hi <= lo:
        hi = lo * (1.0 + 1e-9)
    edges = np.geomspace(lo, hi, 33)
    gl_nodes, gl_weights = np.polynomial.legendre.leggauss(12)
    nodes = []
    weights = []
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        nodes.append(mid + half * gl_nodes)
        weights.append(half * gl_weights)
    return np.concatenate(nodes), np.concatenate(weights)


def solve_shells_equation(
    estimate: ShellDensityEstimate,
    n: int,
    d: int,
    alpha: float,
    t_max: float,
) -> float:
    """Solve ``(2^{d+1} / t^d) integral_rho (g(v)/v) exp(-n v t^d / 2) dv = alpha``.

    The integral uses fixed quadrature nodes (independent of t), so each
    probe of the strictly decreasing left side is one vector operation.

    Raises:
        SolverError: if the bracket [1e-8, t_max] contains no sign change.
    """
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    nodes, weights = _shell_quadrature(estimate)
    g_over_v = estimate.evaluate(nodes) / nodes
    base = weights * g_over_v

    def log_lhs_minus_log_alpha(log_t: float) -> float:
        s = math.exp(log_t * d)
        integral = float(base @ np.exp(-0.5 * n * nodes * s))
        if integral <= 0.0:
            return -math.inf
        return (d + 1) * math.log(2.0) - math.log(s) + math.log(integral) - math.log(alpha)

    lo = math.log(1e-8)
    hi = math.log(t_max)
    f_lo = log_lhs_minus_log_alpha(lo)
    f_hi = log_lhs_minus_log_alpha(hi)
    if f_lo < 0:
        raise SolverError("shells solve: left side already below alpha at t=1e-8")
    if f_hi > 0:
        raise SolverError(f"shells solve: no root below t_max={t_max}")
    root = brentq(log_lhs_minus_log_alpha, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    return float(math.exp(root))


def shells_band(
    cloud: PointCloud,
    params: DensityParams,
    alpha: float,
    split: bool = False,
    seed: int = 0,
    b_shell: float | None = None,
) -> BandResult:
    """Method III: shells band integrating the tail bound over local densities."""
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    if split:
        est_idx, use_idx = _split_indices(cloud.n, seed)
        est_cloud = cloud.subset(est_idx)
        n_solve = use_idx.shape[0]
        split_tag = "estimate-first-half"
    else:
        est_cloud = cloud
        n_solve = cloud.n
        split_tag = "none"
    estimate = shell_g_hat(est_cloud, params, b_shell)
    t = solve_shells_equation(
        estimate, n_solve, params.intrinsic_dim, alpha, t_max=max(cloud.diameter(), 1e-6)
    )
    diag = {
        "rho_hat": estimate.rho_lower,
        "r_n": params.radius,
        "d": float(params.intrinsic_dim),
        "b_shell": estimate.bandwidth,
        "split": split_tag,
        "n_solve": float(n_solve),
    }
    if split:
        diag["seed"] = float(seed)
    return BandResult(method="shells", alpha=alpha, c=t, diagnostics=diag)


@dataclass(frozen=True)
class FeatureSplit:
    """Diagram pairs partitioned into topological signal and noise."""

    signal: tuple[PersistencePair, ...]
    noise: tuple[PersistencePair, ...]

    def count_signal(self, dim: int) -> int:
        return sum(1 for p in self.signal if p.dim == dim)


def significant_features(diagram: PersistenceDiagram, band: BandResult) -> FeatureSplit:
    """Split a diagram by the band: signal strictly beyond c, noise within.

    A pair is signal when its L-infinity distance to the diagonal,
    |death - birth| / 2, strictly exceeds the band half-width. Essential
    classes are always signal.
    """
    signal = []
    noise = []
    for pair in diagram.pairs:
        if pair.essential or pair.diagonal_gap() > band.c:
            signal.append(pair)
        else:
            noise.append(pair)
    return FeatureSplit(signal=tuple(signal), noise=tuple(noise))
