"""Smoothed diagram counts and bootstrap count intervals."""

from __future__ import annotations

import math

import numpy as np
import pytest

from tdaband import (
    ConfigError,
    GeneratorSpec,
    KernelSpec,
    PersistenceDiagram,
    PersistencePair,
    PointCloud,
    bootstrap_count_ci,
    count_beyond,
    default_grid,
    generate,
    smooth_diagram,
)

from conftest import make_diagram


class TestSmoothDiagram:
    def test_empty_diagram_counts_nothing(self):
        sm = smooth_diagram(PersistenceDiagram([]), w=0.5, window=((0, 2), (0, 2)))
        assert sm.counts.sum() == 0

    def test_single_pair_lands_in_one_cell(self):
        dgm = make_diagram([(0.25, 0.75)])
        sm = smooth_diagram(dgm, w=0.5, window=((0.0, 1.0), (0.0, 1.0)))
        assert sm.counts.sum() == 1
        assert (sm.counts == 1).sum() == 1

    def test_boundary_pairs_preserved_by_half_open_cells(self):
        # interior cell boundaries assign to the upper cell, losing nothing;
        # the window's own top edge is exclusive like every other cell edge
        dgm = make_diagram([(0.5, 0.5), (0.0, 0.5), (0.25, 0.75)])
        sm = smooth_diagram(dgm, w=0.5, window=((0.0, 1.0), (0.0, 1.0)))
        assert sm.counts.sum() == 3
        assert sm.counts[1, 1] == 1 and sm.counts[0, 1] == 2
        edge = smooth_diagram(make_diagram([(0.5, 1.0)]), w=0.5, window=((0.0, 1.0), (0.0, 1.0)))
        assert edge.counts.sum() == 0

    def test_points_outside_the_window_are_dropped(self):
        dgm = make_diagram([(5.0, 6.0)])
        sm = smooth_diagram(dgm, w=0.5, window=((0.0, 1.0), (0.0, 1.0)))
        assert sm.counts.sum() == 0

    def test_default_window_covers_every_pair(self):
        dgm = make_diagram([(0.1, 0.4), (0.2, 1.9), (1.0, 2.5)])
        sm = smooth_diagram(dgm, w=0.25)
        assert sm.counts.sum() == 3

    def test_rejects_bad_cell_size(self):
        with pytest.raises(ConfigError):
            smooth_diagram(PersistenceDiagram([]), w=0.0)


class TestCountBeyond:
    def test_zero_threshold_counts_positive_persistence(self):
        dgm = PersistenceDiagram(
            [
                PersistencePair(0, 0.0, 1.0),
                PersistencePair(1, 0.5, 0.5),
                PersistencePair(0, 0.0, math.inf),
            ]
        )
        assert count_beyond(dgm, 0.0) == 2

    def test_euclidean_distance_to_diagonal(self):
        dgm = make_diagram([(0.0, 1.0)])
        # the point (0,1) sits 1/sqrt(2) ~ 0.707 from the diagonal
        assert count_beyond(dgm, 0.8) == 0
        assert count_beyond(dgm, 0.7) == 1

    def test_persistence_geometry_uses_the_lifetime(self):
        dgm = make_diagram([(0.0, 1.0)])
        assert count_beyond(dgm, 0.8, geometry="persistence") == 1
        assert count_beyond(dgm, 1.0, geometry="persistence") == 0

    def test_uncapped_essential_always_counts(self):
        dgm = PersistenceDiagram([PersistencePair(0, 0.0, math.inf)])
        assert count_beyond(dgm, 1e12) == 1

    def test_capped_essential_counts_through_its_capped_lifetime(self):
        dgm = PersistenceDiagram(
            [PersistencePair(0, 1.3, 0.0, essential=True)], orientation="upper"
        )
        assert count_beyond(dgm, 1.0, geometry="persistence") == 1
        assert count_beyond(dgm, 1.5, geometry="persistence") == 0

    def test_monotone_in_threshold(self):
        rng = np.random.default_rng(0)
        pairs = [(b, b + g) for b, g in rng.uniform(0, 1, size=(20, 2))]
        dgm = make_diagram(pairs)
        counts = [count_beyond(dgm, t) for t in np.linspace(0, 1.5, 25)]
        assert all(a >= b for a, b in zip(counts, counts[1:]))

    def test_unknown_geometry_rejected(self):
        with pytest.raises(ConfigError):
            count_beyond(make_diagram([]), 0.1, geometry="taxicab")


class TestBootstrapCountCi:
    def test_degenerate_cloud_is_deterministic(self):
        c = PointCloud(np.zeros((15, 1)))
        k = KernelSpec.make("gaussian", 0.3, 1)
        grid = default_grid(c, k, 64)
        # single mode of height K(0)/h ~ 1.33, capped at death 0
        low = bootstrap_count_ci(c, k, grid, 0.5, 0.05, replicates=25, seed=0, geometry="persistence")
        high = bootstrap_count_ci(c, k, grid, 2.0, 0.05, replicates=25, seed=0, geometry="persistence")
        assert low == (1, 1)
        assert high == (0, 0)

    def test_endpoints_are_ordered_integers(self):
        rng = np.random.default_rng(1)
        c = PointCloud(rng.normal(size=(40, 1)))
        k = KernelSpec.make("gaussian", 0.3, 1)
        grid = default_grid(c, k, 64)
        lo, hi = bootstrap_count_ci(c, k, grid, 0.05, 0.05, replicates=30, seed=2)
        assert isinstance(lo, int) and isinstance(hi, int)
        assert 0 <= lo <= hi

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(3)
        c = PointCloud(rng.normal(size=(30, 1)))
        k = KernelSpec.make("gaussian", 0.3, 1)
        grid = default_grid(c, k, 32)
        a = bootstrap_count_ci(c, k, grid, 0.1, 0.05, replicates=40, seed=5)
        b = bootstrap_count_ci(c, k, grid, 0.1, 0.05, replicates=40, seed=5)
        assert a == b

    def test_five_spike_count_interval(self):
        cloud = generate(GeneratorSpec("bart_simpson", 1000, seed=0))
        k = KernelSpec.make("gaussian", 0.05, 1)
        grid = default_grid(cloud, k, 512)
        lo, hi = bootstrap_count_ci(
            cloud, k, grid, 0.34, 0.05, replicates=300, seed=0, geometry="persistence"
        )
        assert lo <= 5 and hi >= 3
