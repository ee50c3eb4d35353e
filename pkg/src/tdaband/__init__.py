"""Persistence diagrams with statistical confidence bands.

The library computes persistence diagrams from point clouds (Rips
filtrations) and from density estimates (upper-level-set filtrations),
and builds four kinds of confidence bands that separate topological
signal from sampling noise: subsampling, concentration of measure,
shells, and density bootstrap.
"""

from ._grid import GridField
from .complexes import Filtration, Simplex, lower_star_filtration, rips_filtration
from .confidence import (
    BandResult,
    FeatureSplit,
    ShellDensityEstimate,
    concentration_band,
    conservative_band,
    conservative_t,
    default_subsample_size,
    lambert_solve,
    shell_g_hat,
    shells_band,
    significant_features,
    solve_shells_equation,
    subsample_band,
)
from .datasets import GENERATOR_KINDS, GeneratorSpec, bart_simpson_pdf, generate, with_outliers
from .density import (
    KernelSpec,
    bootstrap_band,
    default_grid,
    density_diagram,
    grid_band,
    hoeffding_band,
    kde,
)
from .errors import ConfigError, SolverError, TdabandError
from .experiments import (
    EXPERIMENT_NAMES,
    ExperimentConfig,
    density_band,
    experiment_configs,
    run_experiment,
    run_named_experiment,
)
from .geometry import (
    DensityParams,
    PointCloud,
    default_rn,
    hausdorff,
    local_density,
    rho_hat,
)
from .metrics import MatchingProblem, bottleneck, sup_distance
from .persistence import (
    PersistenceDiagram,
    PersistencePair,
    betti_at,
    reduce,
    rips_diagram,
    total_persistence,
)
from .pointprocess import SmoothedDiagram, bootstrap_count_ci, count_beyond, smooth_diagram
from .svgplot import cloud_svg, diagram_svg

__version__ = "0.1.0"

__all__ = [
    "BandResult",
    "ConfigError",
    "DensityParams",
    "EXPERIMENT_NAMES",
    "ExperimentConfig",
    "FeatureSplit",
    "Filtration",
    "GENERATOR_KINDS",
    "GeneratorSpec",
    "GridField",
    "KernelSpec",
    "MatchingProblem",
    "PersistenceDiagram",
    "PersistencePair",
    "PointCloud",
    "ShellDensityEstimate",
    "Simplex",
    "SmoothedDiagram",
    "SolverError",
    "TdabandError",
    "bart_simpson_pdf",
    "betti_at",
    "bootstrap_band",
    "bootstrap_count_ci",
    "bottleneck",
    "cloud_svg",
    "concentration_band",
    "conservative_band",
    "conservative_t",
    "count_beyond",
    "default_grid",
    "default_rn",
    "default_subsample_size",
    "density_band",
    "density_diagram",
    "diagram_svg",
    "experiment_configs",
    "generate",
    "grid_band",
    "hausdorff",
    "hoeffding_band",
    "kde",
    "lambert_solve",
    "local_density",
    "lower_star_filtration",
    "reduce",
    "rho_hat",
    "rips_diagram",
    "rips_filtration",
    "run_experiment",
    "run_named_experiment",
    "shell_g_hat",
    "shells_band",
    "significant_features",
    "smooth_diagram",
    "solve_shells_equation",
    "subsample_band",
    "sup_distance",
    "total_persistence",
    "with_outliers",
]
