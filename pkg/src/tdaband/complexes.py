"""Filtered simplicial complexes: Vietoris-Rips and lower-star constructions.

Both builders emit a Filtration, an ordered list of (simplex, value) pairs
closed under faces, which the persistence module reduces to a diagram.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from ._grid import GridField
from .errors import ConfigError
from .geometry import PointCloud


@dataclass(frozen=True)
class Simplex:
    """An abstract simplex: a strictly increasing tuple of vertex indices."""

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        verts = tuple(int(v) for v in self.vertices)
        if not verts:
            raise ConfigError("a simplex needs at least one vertex")
        if any(b <= a for a, b in zip(verts, verts[1:])):
            raise ConfigError(f"vertices must be strictly increasing, got {verts}")
        object.__setattr__(self, "vertices", verts)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> list["Simplex"]:
        """All codimension-1 faces, empty for a vertex."""
        if self.dim == 0:
            return []
        verts = self.vertices
        return [Simplex(verts[:i] + verts[i + 1 :]) for i in range(len(verts))]

    def __lt__(self, other: "Simplex") -> bool:
        return (self.dim, self.vertices) < (other.dim, other.vertices)


@dataclass
class Filtration:
    """Simplices with filtration values, ordered by (value, dim, vertex tuple).

    The constructor sorts its input; the ordering is then a valid
    simplexwise filtration whenever the input is closed under faces with
    face values no larger than coface values.
    """

    simplices: list[tuple[Simplex, float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.simplices = sorted(
            ((s, float(v)) for s, v in self.simplices),
            key=lambda item: (item[1], item[0].dim, item[0].vertices),
        )

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def max_value(self) -> float:
        return max((v for _, v in self.simplices), default=0.0)

    def validate(self) -> None:
        """Check face closure and monotone face values; raise ConfigError if violated.

        Exhaustive, intended for tests and small filtrations.
        """
        value_of: dict[tuple[int, ...], float] = {}
        for s, v in self.simplices:
            value_of[s.vertices] = v
        for s, v in self.simplices:
            for f in s.faces():
                if f.vertices not in value_of:
                    raise ConfigError(f"face {f.vertices} of {s.vertices} missing")
                if value_of[f.vertices] > v + 1e-12:
                    raise ConfigError(
                        f"face {f.vertices} enters after coface {s.vertices}"
                    )

    def dump(self) -> str:
        """Debug text: one line `value dim v0 v1 ... vk` per simplex in order."""
        lines = [
            " ".join([repr(v), str(s.dim)] + [str(u) for u in s.vertices])
            for s, v in self.simplices
        ]
        return "\n".join(lines)


def rips_filtration(cloud: PointCloud, max_scale: float, max_dim: int = 2) -> Filtration:
    """Vietoris-Rips filtration of a point cloud.

    Vertices enter at 0 and an edge {i, j} at half the Euclidean distance
    between its endpoints, so a simplex with value eps has diameter at
    most 2 * eps. A k-simplex enters at the maximum of its edge values.
    Simplices with value above ``max_scale`` or dimension above
    ``max_dim`` are omitted.

    Intended as the reference construction; quadratic in memory in the
    number of retained simplices.
    """
    if not (max_scale > 0):
        raise ConfigError(f"max_scale must be positive, got {max_scale}")
    if max_dim < 0:
        raise ConfigError(f"max_dim must be >= 0, got {max_dim}")
    n = cloud.n
    half = cdist(cloud.points, cloud.points) / 2.0
    out: list[tuple[Simplex, float]] = [(Simplex((i,)), 0.0) for i in range(n)]
    if max_dim == 0:
        return Filtration(out)
    # Neighbor lists restricted to higher indices keep the expansion lexicographic.
    nbrs: list[np.ndarray] = [
        np.nonzero(half[i, i + 1 :] <= max_scale)[0] + i + 1 for i in range(n)
    ]
    frontier: list[tuple[tuple[int, ...], float]] = []
    for i in range(n):
        for j in nbrs[i]:
            frontier.append(((i, int(j)), float(half[i, j])))
    for verts, value in frontier:
        out.append((Simplex(verts), value))
    dim = 1
    while dim < max_dim and frontier:
        nxt: list[tuple[tuple[int, ...], float]] = []
        for verts, value in frontier:
            last = verts[-1]
            for cand in nbrs[last]:
                c = int(cand)
                d_to_c = half[list(verts), c].max()
                if d_to_c <= max_scale:
                    nxt.append((verts + (c,), float(max(value, d_to_c))))
        for verts, value in nxt:
            out.append((Simplex(verts), value))
        frontier = nxt
        dim += 1
    return Filtration(out)


def _kuhn_maximal_simplices(resolution: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Maximal simplices of the Freudenthal/Kuhn triangulation of the grid.

    Each grid cube is cut into D! simplices, one per coordinate-axis
    permutation; every simplex walks from the cube's low corner to its
    high corner one axis at a time.
    """
    dim = len(resolution)
    strides = np.zeros(dim, dtype=np.int64)
    acc = 1
    for axis in range(dim - 1, -1, -1):
        strides[axis] = acc
        acc *= resolution[axis]
    cells = itertools.product(*[range(r - 1) for r in resolution])
    perms = list(itertools.permutations(range(dim)))
    maximal: list[tuple[int, ...]] = []
    for cell in cells:
        base = int(sum(c * s for c, s in zip(cell, strides)))
        for perm in perms:
            walk = [base]
            cur = base
            for axis in perm:
                cur += int(strides[axis])
                walk.append(cur)
            maximal.append(tuple(sorted(walk)))
    return maximal


def lower_star_filtration(fld: GridField, negate: bool = False) -> Filtration:
    """Lower-star filtration of a grid field over its Kuhn triangulation.

    Every vertex enters at its field value (negated when ``negate`` is
    set, which realizes upper-level-set filtrations), and every higher
    simplex at the maximum of its vertex values.
    """
    values = -fld.values if negate else fld.values
    flat = values.ravel()
    by_verts: dict[tuple[int, ...], float] = {}
    for i in range(flat.shape[0]):
        by_verts[(i,)] = float(flat[i])
    for maximal in _kuhn_maximal_simplices(fld.resolution):
        for k in range(2, len(maximal) + 1):
            for sub in itertools.combinations(maximal, k):
                if sub not in by_verts:
                    by_verts[sub] = float(max(flat[v] for v in sub))
    return Filtration([(Simplex(verts), v) for verts, v in by_verts.items()])
