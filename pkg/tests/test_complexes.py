"""Rips and lower-star filtration construction."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from tdaband import (
    ConfigError,
    GridField,
    PointCloud,
    Simplex,
    lower_star_filtration,
    rips_filtration,
)


def check_face_closure(filt) -> None:
    """Every codimension-1 face present, no later than its coface."""
    value_of = {}
    for s, v in filt:
        value_of[s.vertices] = v
    for s, v in filt:
        for face in s.faces():
            assert face.vertices in value_of
            assert value_of[face.vertices] <= v + 1e-12


def check_filtration_order(filt) -> None:
    seen = set()
    last = -np.inf
    for s, v in filt:
        assert v >= last
        last = v
        for face in s.faces():
            assert face.vertices in seen
        seen.add(s.vertices)


class TestRips:
    def test_equilateral_triangle(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
        filt = rips_filtration(PointCloud(pts), max_scale=1.0, max_dim=2)
        by_dim = {0: [], 1: [], 2: []}
        for s, v in filt:
            by_dim[s.dim].append(v)
        assert by_dim[0] == [0.0, 0.0, 0.0]
        assert by_dim[1] == pytest.approx([0.5, 0.5, 0.5], abs=1e-12)
        assert by_dim[2] == pytest.approx([0.5], abs=1e-12)

    def test_single_point(self):
        filt = rips_filtration(PointCloud(np.array([[1.0, 2.0]])), max_scale=1.0)
        assert len(filt) == 1
        (s, v), = list(filt)
        assert s.vertices == (0,) and v == 0.0

    def test_max_scale_prunes_long_edges(self):
        pts = np.array([[0.0], [4.0]])
        filt = rips_filtration(PointCloud(pts), max_scale=1.0)
        assert [s.dim for s, _ in filt] == [0, 0]

    def test_edge_values_are_half_distances(self):
        rng = np.random.default_rng(4)
        pts = rng.normal(size=(9, 3))
        c = PointCloud(pts)
        filt = rips_filtration(c, max_scale=10.0, max_dim=1)
        for s, v in filt:
            if s.dim == 1:
                i, j = s.vertices
                assert v == pytest.approx(np.linalg.norm(pts[i] - pts[j]) / 2, abs=1e-12)

    def test_simplex_value_is_max_edge_value(self):
        rng = np.random.default_rng(9)
        pts = rng.normal(size=(12, 2))
        filt = rips_filtration(PointCloud(pts), max_scale=1.5, max_dim=2)
        for s, v in filt:
            if s.dim >= 1:
                expected = max(
                    np.linalg.norm(pts[i] - pts[j]) / 2
                    for i, j in itertools.combinations(s.vertices, 2)
                )
                assert v == pytest.approx(expected, abs=1e-12)

    def test_growing_max_scale_only_appends(self):
        rng = np.random.default_rng(6)
        c = PointCloud(rng.normal(size=(10, 2)))
        small = {s.vertices: v for s, v in rips_filtration(c, max_scale=0.5)}
        large = {s.vertices: v for s, v in rips_filtration(c, max_scale=1.5)}
        assert set(small) <= set(large)
        for key, v in small.items():
            assert large[key] == v

    def test_face_closure_and_order(self):
        rng = np.random.default_rng(8)
        c = PointCloud(rng.normal(size=(10, 2)))
        filt = rips_filtration(c, max_scale=2.0, max_dim=2)
        check_face_closure(filt)
        check_filtration_order(filt)

    def test_rejects_bad_parameters(self):
        c = PointCloud(np.array([[0.0], [1.0]]))
        with pytest.raises(ConfigError):
            rips_filtration(c, max_scale=0.0)
        with pytest.raises(ConfigError):
            rips_filtration(c, max_scale=1.0, max_dim=-1)


class TestLowerStar:
    def test_1d_three_vertex_field(self):
        fld = GridField(((0.0, 2.0),), (3,), np.array([3.0, 1.0, 2.0]))
        filt = lower_star_filtration(fld, negate=True)
        vertex_vals = sorted(v for s, v in filt if s.dim == 0)
        edge_vals = sorted(v for s, v in filt if s.dim == 1)
        assert vertex_vals == [-3.0, -2.0, -1.0]
        assert edge_vals == [-1.0, -1.0]

    def test_constant_field_enters_at_once(self):
        fld = GridField(((0.0, 1.0), (0.0, 1.0)), (3, 3), np.full((3, 3), 2.0))
        filt = lower_star_filtration(fld)
        assert {v for _, v in filt} == {2.0}

    def test_2x2_grid_triangulation_counts(self):
        fld = GridField(
            ((0.0, 1.0), (0.0, 1.0)), (2, 2), np.array([[1.0, 2.0], [3.0, 4.0]])
        )
        filt = lower_star_filtration(fld)
        dims = [s.dim for s, _ in filt]
        assert dims.count(0) == 4
        assert dims.count(1) == 5
        assert dims.count(2) == 2
        check_face_closure(filt)

    def test_simplex_value_is_max_vertex_value(self):
        rng = np.random.default_rng(12)
        fld = GridField(((0.0, 1.0), (0.0, 1.0)), (5, 4), rng.normal(size=(5, 4)))
        filt = lower_star_filtration(fld)
        vertex_value = {s.vertices[0]: v for s, v in filt if s.dim == 0}
        for s, v in filt:
            assert v == max(vertex_value[u] for u in s.vertices)
        check_filtration_order(filt)

    def test_negate_flips_vertex_values(self):
        rng = np.random.default_rng(13)
        fld = GridField(((0.0, 1.0),), (6,), rng.normal(size=6))
        plain = {s.vertices: v for s, v in lower_star_filtration(fld) if s.dim == 0}
        flipped = {s.vertices: v for s, v in lower_star_filtration(fld, negate=True) if s.dim == 0}
        for key, v in plain.items():
            assert flipped[key] == -v


class TestSimplex:
    def test_faces_of_a_triangle(self):
        s = Simplex((0, 2, 5))
        assert {f.vertices for f in s.faces()} == {(0, 2), (0, 5), (2, 5)}

    def test_rejects_unsorted_vertices(self):
        with pytest.raises(ConfigError):
            Simplex((2, 1))

    def test_dump_format(self):
        c = PointCloud(np.array([[0.0], [1.0]]))
        filt = rips_filtration(c, max_scale=1.0, max_dim=1)
        lines = filt.dump().splitlines()
        assert len(lines) == 3
        parts = lines[-1].split()
        assert parts[1] == "1" and parts[2:] == ["0", "1"]
