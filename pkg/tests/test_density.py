"""Kernel density estimation on grids and the density-side confidence bands."""

from __future__ import annotations

import math

import numpy as np
import pytest

from tdaband import (
    ConfigError,
    GridField,
    KernelSpec,
    PointCloud,
    bootstrap_band,
    default_grid,
    density_diagram,
    grid_band,
    hoeffding_band,
    kde,
    sup_distance,
    bart_simpson_pdf,
)

from oracles import bisect_root


def gaussian(h: float, dim: int) -> KernelSpec:
    return KernelSpec.make("gaussian", h, dim)


class TestKde:
    def test_single_point_peak_value(self):
        c = PointCloud(np.array([[0.0]]))
        grid = GridField.geometry(((-1.0, 1.0),), (5,))
        fld = kde(c, gaussian(0.25, 1), grid)
        center = fld.values[2]
        assert center == pytest.approx((2 * math.pi) ** -0.5 / 0.25, rel=1e-12)

    def test_total_mass_is_one(self):
        rng = np.random.default_rng(0)
        c = PointCloud(rng.normal(size=(40, 1)))
        h = 0.3
        lo = float(c.points.min() - 5 * h)
        hi = float(c.points.max() + 5 * h)
        grid = GridField.geometry(((lo, hi),), (2000,))
        fld = kde(c, gaussian(h, 1), grid)
        step = (hi - lo) / 1999
        assert float(fld.values.sum() * step) == pytest.approx(1.0, rel=0.01)

    def test_symmetric_cloud_gives_symmetric_field(self):
        c = PointCloud(np.array([[-0.7], [0.7]]))
        grid = GridField.geometry(((-2.0, 2.0),), (41,))
        fld = kde(c, gaussian(0.3, 1), grid)
        assert np.allclose(fld.values, fld.values[::-1], atol=1e-14)

    def test_point_order_does_not_matter(self):
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(30, 2))
        grid = GridField.geometry(((-3.0, 3.0), (-3.0, 3.0)), (16, 16))
        k = gaussian(0.3, 2)
        a = kde(PointCloud(pts), k, grid)
        b = kde(PointCloud(pts[::-1]), k, grid)
        assert np.allclose(a.values, b.values, atol=1e-12)

    def test_values_nonnegative(self):
        rng = np.random.default_rng(6)
        c = PointCloud(rng.normal(size=(20, 2)))
        fld = kde(c, gaussian(0.3, 2), default_grid(c, gaussian(0.3, 2), 24))
        assert (fld.values >= 0).all()


class TestHoeffdingBand:
    def test_frozen_regression_value(self):
        k = gaussian(0.3, 2)
        assert hoeffding_band(500, k, 2.0, 2, 0.05) == pytest.approx(
            0.40188968570792827, rel=1e-9
        )

    def test_solution_satisfies_the_equation(self):
        k = gaussian(0.3, 2)
        delta = hoeffding_band(500, k, 2.0, 2, 0.05)
        h, d, k0, lip = 0.3, 2, k.k0, k.lipschitz
        lhs = 2 * (4 * 2.0 * lip * math.sqrt(d) / (delta * h ** (d + 1))) ** d * math.exp(
            -500 * delta**2 * h ** (2 * d) / (2 * k0**2)
        )
        assert lhs == pytest.approx(0.05, abs=1e-10)

    def test_matches_independent_bisection(self):
        k = gaussian(0.3, 2)

        def lhs_minus_alpha(delta):
            return 2 * (4 * 2.0 * k.lipschitz * math.sqrt(2) / (delta * 0.3**3)) ** 2 * math.exp(
                -500 * delta**2 * 0.3**4 / (2 * k.k0**2)
            ) - 0.05

        want = bisect_root(lhs_minus_alpha, 1e-12, 1e9)
        assert hoeffding_band(500, k, 2.0, 2, 0.05) == pytest.approx(want, rel=1e-10)

    def test_more_data_shrinks_the_band(self):
        k = gaussian(0.3, 2)
        vals = [hoeffding_band(n, k, 2.0, 2, 0.05) for n in (250, 500, 1000)]
        assert vals[0] > vals[1] > vals[2]

    def test_monotone_in_alpha(self):
        k = gaussian(0.3, 2)
        vals = [hoeffding_band(500, k, 2.0, 2, a) for a in (0.01, 0.05, 0.2)]
        assert vals[0] >= vals[1] >= vals[2]


class TestGridBand:
    def test_closed_form(self):
        k = gaussian(0.3, 2)
        want = (k.k0 / 0.3) ** 2 * math.sqrt(math.log(2 * 1024 / 0.05) / (2 * 1000))
        assert grid_band(1000, k, 1024, 0.05) == pytest.approx(want, rel=1e-15)
        assert grid_band(1000, k, 1024, 0.05) == pytest.approx(
            0.020509364163854578, rel=1e-12
        )

    def test_degenerate_alpha_gives_zero(self):
        k = gaussian(0.3, 2)
        assert grid_band(1000, k, 16, alpha=32.0) == 0.0

    def test_alpha_beyond_degenerate_rejected(self):
        k = gaussian(0.3, 2)
        with pytest.raises(ConfigError):
            grid_band(1000, k, 16, alpha=64.0)

    def test_quadrupling_n_halves_the_band(self):
        k = gaussian(0.3, 2)
        assert grid_band(4000, k, 256, 0.05) == pytest.approx(
            grid_band(1000, k, 256, 0.05) / 2, rel=1e-12
        )


class TestBootstrapBand:
    def test_degenerate_cloud_gives_zero(self):
        c = PointCloud(np.tile([[0.5, 0.5]], (20, 1)))
        k = gaussian(0.3, 2)
        grid = GridField.geometry(((0.0, 1.0), (0.0, 1.0)), (8, 8))
        # every resample is the same multiset, so the band is zero up to
        # the float accumulation order of the weighted kernel sums
        assert bootstrap_band(c, k, grid, 0.05, replicates=20, seed=0) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(1)
        c = PointCloud(rng.normal(size=(60, 2)))
        k = gaussian(0.3, 2)
        grid = default_grid(c, k, 16)
        a = bootstrap_band(c, k, grid, 0.05, replicates=40, seed=9)
        b = bootstrap_band(c, k, grid, 0.05, replicates=40, seed=9)
        assert a == b

    def test_stable_across_seeds(self, circle500):
        k = gaussian(0.3, 2)
        grid = default_grid(circle500, k, 64)
        vals = [
            bootstrap_band(circle500, k, grid, 0.05, replicates=300, seed=s)
            for s in range(5)
        ]
        spread = (max(vals) - min(vals)) / np.mean(vals)
        assert spread < 0.15

    def test_monotone_in_alpha(self):
        rng = np.random.default_rng(2)
        c = PointCloud(rng.normal(size=(50, 2)))
        k = gaussian(0.3, 2)
        grid = default_grid(c, k, 16)
        vals = [
            bootstrap_band(c, k, grid, a, replicates=60, seed=3)
            for a in (0.01, 0.05, 0.2, 0.5)
        ]
        assert all(x >= y for x, y in zip(vals, vals[1:]))


class TestDensityDiagram:
    def test_single_peak(self):
        fld = GridField(((0.0, 1.0),), (3,), np.array([0.0, 1.0, 0.0]))
        dgm = density_diagram(fld)
        (peak,) = dgm.in_dim(0)
        assert peak.birth == pytest.approx(1.0)
        assert peak.death == pytest.approx(0.0)
        assert peak.essential

    def test_two_peaks(self):
        fld = GridField(((0.0, 1.0),), (5,), np.array([0.0, 2.0, 1.0, 3.0, 0.0]))
        dgm = density_diagram(fld)
        pairs = sorted(dgm.in_dim(0), key=lambda p: -p.birth)
        assert [(p.birth, p.death) for p in pairs] == [(3.0, 0.0), (2.0, 1.0)]
        assert pairs[0].essential and not pairs[1].essential

    def test_births_never_below_deaths(self):
        rng = np.random.default_rng(14)
        fld = GridField(((0.0, 1.0), (0.0, 1.0)), (9, 9), rng.random((9, 9)))
        dgm = density_diagram(fld)
        assert dgm.orientation == "upper"
        assert all(p.birth >= p.death for p in dgm.pairs)

    def test_five_spike_mixture(self):
        xs = np.linspace(-3.0, 3.0, 4001)
        fld = GridField(((-3.0, 3.0),), (4001,), bart_simpson_pdf(xs))
        dgm = density_diagram(fld)
        tall = [p for p in dgm.in_dim(0) if p.persistence > 0.3]
        assert len(tall) == 5


class TestDefaultGrid:
    def test_box_inflated_by_three_bandwidths(self):
        c = PointCloud(np.array([[0.0, 0.0], [1.0, 2.0]]))
        k = gaussian(0.3, 2)
        grid = default_grid(c, k, 32)
        assert grid.box[0] == pytest.approx((-0.9, 1.9))
        assert grid.box[1] == pytest.approx((-0.9, 2.9))
        assert grid.resolution == (32, 32)

    def test_csv_round_trip(self, tmp_path):
        rng = np.random.default_rng(3)
        fld = GridField(((-1.0, 1.0), (0.0, 2.0)), (4, 5), rng.normal(size=(4, 5)))
        path = tmp_path / "field.csv"
        fld.save_csv(path)
        again = GridField.load_csv(path)
        assert again.box == fld.box
        assert again.resolution == fld.resolution
        assert np.array_equal(again.values, fld.values)


class TestKernelSpec:
    @pytest.mark.parametrize("kind", ["gaussian", "epanechnikov-smoothed", "triangular"])
    def test_known_kinds_have_positive_constants(self, kind):
        k = KernelSpec.make(kind, 0.3, 2)
        assert k.k0 > 0 and k.lipschitz > 0
        assert float(k.profile(np.array([0.0]))[0]) == pytest.approx(k.k0)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigError):
            KernelSpec.make("boxcar", 0.3, 2)

    def test_bad_bandwidth_rejected(self):
        with pytest.raises(ConfigError):
            KernelSpec.make("gaussian", 0.0, 2)


class TestEmpiricalCoverage:
    def test_deviations_stay_inside_the_hoeffding_band(self):
        # The target is the smoothed density: convolution of the sampling
        # distribution with the kernel, computed by direct quadrature. The
        # band is a loose tail bound, so exceedances should be rare even
        # at modest n; allow the nominal alpha fraction.
        h = 0.3
        k = gaussian(h, 2)
        box = ((-1.9, 1.9), (-1.9, 1.9))
        grid = GridField.geometry(box, (32, 32))
        theta = np.linspace(0, 2 * np.pi, 1500, endpoint=False)
        circle = np.column_stack([np.cos(theta), np.sin(theta)])
        xs = grid.grid_points()
        d2 = ((xs[:, None, :] - circle[None, :, :]) ** 2).sum(axis=2)
        smoothed = np.exp(-d2 / (2 * h * h)).mean(axis=1) / (2 * np.pi * h * h)
        target = grid.with_values(smoothed.reshape(grid.resolution))

        n, alpha, draws = 200, 0.05, 200
        band = hoeffding_band(n, k, 1.9, 2, alpha)
        exceed = 0
        for seed in range(draws):
            rng = np.random.default_rng(seed)
            ang = rng.uniform(0, 2 * np.pi, size=n)
            c = PointCloud(np.column_stack([np.cos(ang), np.sin(ang)]))
            dev = sup_distance(kde(c, k, grid), target)
            exceed += dev > band
        assert exceed <= alpha * draws
