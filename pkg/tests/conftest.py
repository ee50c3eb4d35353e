"""Shared fixtures: canned clouds and diagram builders."""

from __future__ import annotations

import numpy as np
import pytest

from tdaband import GeneratorSpec, PersistenceDiagram, PersistencePair, PointCloud, generate


@pytest.fixture(scope="session")
def circle500() -> PointCloud:
    return generate(GeneratorSpec("uniform_circle", 500, seed=0))


@pytest.fixture(scope="session")
def square_loop() -> PointCloud:
    return PointCloud(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]))


def make_diagram(pairs, dim: int = 1) -> PersistenceDiagram:
    """Build a diagram of finite pairs in a single homology dimension."""
    return PersistenceDiagram([PersistencePair(dim, b, d) for b, d in pairs])
