"""Point cloud distances and the local mass-density estimator."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdaband import (
    ConfigError,
    DensityParams,
    PointCloud,
    default_rn,
    hausdorff,
    local_density,
    rho_hat,
)

from oracles import brute_hausdorff


def cloud(*pts) -> PointCloud:
    return PointCloud(np.array(pts, dtype=float))


clouds_2d = st.lists(
    st.tuples(
        st.floats(-5, 5, allow_nan=False, allow_infinity=False),
        st.floats(-5, 5, allow_nan=False, allow_infinity=False),
    ),
    min_size=1,
    max_size=20,
).map(lambda pts: PointCloud(np.array(pts, dtype=float)))


class TestHausdorff:
    def test_identical_clouds(self):
        a = cloud((2, 0), (0, 2), (-2, 0), (0, -2))
        assert hausdorff(a, a) == 0.0

    def test_single_pair(self):
        assert hausdorff(cloud((0, 0)), cloud((3, 4))) == pytest.approx(5.0)

    def test_one_sided_extra_point(self):
        assert hausdorff(cloud((0, 0), (1, 0)), cloud((0, 0))) == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ConfigError):
            hausdorff(cloud((0, 0)), cloud((0, 0, 0)))

    @given(clouds_2d, clouds_2d)
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, a, b):
        assert hausdorff(a, b) == pytest.approx(
            brute_hausdorff(a.points, b.points), abs=1e-12
        )

    @given(clouds_2d, clouds_2d)
    @settings(max_examples=60, deadline=None)
    def test_symmetry(self, a, b):
        assert hausdorff(a, b) == hausdorff(b, a)

    @given(clouds_2d, clouds_2d, clouds_2d)
    @settings(max_examples=40, deadline=None)
    def test_triangle_inequality(self, a, b, c):
        assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-9

    def test_filling_in_a_subset_never_hurts(self):
        # With A within A' within B, growing A toward B can only shrink the
        # distance: every point of B gets a nearest neighbor at least as close.
        rng = np.random.default_rng(5)
        full = PointCloud(rng.normal(size=(30, 2)))
        small = full.subset(np.arange(8))
        grown = full.subset(np.arange(20))
        assert hausdorff(grown, full) <= hausdorff(small, full) + 1e-12

    def test_scaling(self):
        rng = np.random.default_rng(7)
        a = PointCloud(rng.normal(size=(12, 2)))
        b = PointCloud(rng.normal(size=(9, 2)))
        lam = 2.5
        scaled = hausdorff(PointCloud(lam * a.points), PointCloud(lam * b.points))
        assert scaled == pytest.approx(lam * hausdorff(a, b), rel=1e-12)


class TestLocalDensity:
    def test_single_point_counts_itself(self):
        c = cloud((0.0,))
        assert local_density(c, np.array([0.0]), DensityParams(1, 1.0)) == 1.0

    def test_far_pair_halves_the_count(self):
        c = cloud((0.0,), (10.0,))
        val = local_density(c, np.array([0.0]), DensityParams(1, 1.0))
        assert val == pytest.approx(0.5)

    def test_circle_arc_mass(self):
        # Points within r/2 of a point on the unit circle span an arc of
        # length ~ r, so the normalized count approaches 1/(2 pi).
        rng = np.random.default_rng(3)
        theta = rng.uniform(0, 2 * np.pi, size=1000)
        c = PointCloud(np.column_stack([np.cos(theta), np.sin(theta)]))
        params = DensityParams(1, 0.1)
        vals = [local_density(c, c.points[i], params) for i in range(0, 1000, 100)]
        assert np.mean(vals) == pytest.approx(1 / (2 * np.pi), rel=0.35)

    def test_scaling(self):
        rng = np.random.default_rng(11)
        pts = rng.normal(size=(40, 2))
        lam, d, r = 3.0, 2, 0.8
        v1 = local_density(PointCloud(pts), pts[0], DensityParams(d, r))
        v2 = local_density(PointCloud(lam * pts), lam * pts[0], DensityParams(d, lam * r))
        assert v2 == pytest.approx(v1 / lam**d, rel=1e-12)


class TestRhoHat:
    def test_single_point(self):
        assert rho_hat(cloud((0.0,)), DensityParams(1, 1.0)) == 1.0

    def test_isolated_point_dominates_the_min(self):
        rng = np.random.default_rng(0)
        pts = np.vstack([rng.normal(scale=1e-3, size=(99, 2)), [[100.0, 0.0]]])
        assert rho_hat(PointCloud(pts), DensityParams(2, 1.0)) == pytest.approx(0.01)

    def test_is_the_min_of_local_densities(self):
        rng = np.random.default_rng(1)
        c = PointCloud(rng.normal(size=(50, 2)))
        params = DensityParams(2, 0.5)
        vals = [local_density(c, c.points[i], params) for i in range(c.n)]
        rh = rho_hat(c, params)
        assert rh == pytest.approx(min(vals), abs=1e-15)
        assert all(rh <= v + 1e-15 for v in vals)

    def test_circle_bracket(self):
        # Empirical bracket over seeds: the min local density on a uniform
        # circle sample sits below 1/(2 pi) but stays well above zero.
        params = DensityParams(1, default_rn(500, 1))
        vals = []
        for seed in range(10):
            rng = np.random.default_rng(seed)
            theta = rng.uniform(0, 2 * np.pi, size=500)
            c = PointCloud(np.column_stack([np.cos(theta), np.sin(theta)]))
            vals.append(rho_hat(c, params))
        assert 0.02 < min(vals) and max(vals) < 1 / (2 * np.pi) + 0.05


class TestDefaultRn:
    def test_frozen_values(self):
        assert default_rn(500, 1) == pytest.approx(0.2316405464434339, abs=1e-15)
        assert default_rn(1000, 2) == pytest.approx(0.28829309185871155, abs=1e-15)

    @pytest.mark.parametrize("n", [2, 10, 500, 10_000])
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_matches_formula(self, n, d):
        assert default_rn(n, d) == pytest.approx(
            (math.log(n) / n) ** (1 / (d + 2)), rel=1e-15
        )

    def test_rejects_tiny_n(self):
        with pytest.raises(ConfigError):
            default_rn(1, 1)


class TestPointCloudIO:
    def test_csv_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        c = PointCloud(rng.normal(size=(25, 3)))
        path = tmp_path / "pts.csv"
        c.save_csv(path)
        again = PointCloud.load_csv(path)
        assert np.array_equal(c.points, again.points)

    def test_save_is_deterministic(self, tmp_path):
        c = cloud((0.25, -1.5), (3.0, 2.0))
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        c.save_csv(p1)
        c.save_csv(p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_ragged_rows_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.0,1.0\n2.0\n")
        with pytest.raises(ConfigError):
            PointCloud.load_csv(path)

    def test_empty_cloud_rejected(self):
        with pytest.raises(ConfigError):
            PointCloud(np.empty((0, 2)))
