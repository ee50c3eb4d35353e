"""Boundary-matrix reduction over Z2 and persistence diagram statistics.

The reduction is the standard column algorithm: process simplices in
filtration order, repeatedly adding earlier columns with the same lowest
nonzero row until each column is empty (the simplex creates a class) or
has a unique low (the simplex kills the class created at its low). Pairs
of creator and killer values form the diagram; creators that are never
killed become essential classes with infinite death.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .complexes import Filtration, rips_filtration
from .errors import ConfigError
from .geometry import PointCloud

_INF = math.inf


@dataclass(frozen=True)
class PersistencePair:
    """One diagram point: a class of dimension ``dim`` born and dying as given.

    ``death`` may be ``math.inf`` for essential classes. Upper-level-set
    diagrams report essential classes with the death capped at a finite
    display value and ``essential`` set, so the flag, not the death value,
    is the authoritative essential marker.
    """

    dim: int
    birth: float
    death: float
    essential: bool = False

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise ConfigError(f"negative homology dimension {self.dim}")
        if not math.isfinite(self.birth):
            raise ConfigError(f"birth must be finite, got {self.birth}")
        if math.isnan(self.death):
            raise ConfigError("death must not be NaN")
        if math.isinf(self.death):
            object.__setattr__(self, "essential", True)

    @property
    def persistence(self) -> float:
        """Absolute lifetime |death - birth|; infinite for uncapped essentials."""
        if math.isinf(self.death):
            return _INF
        return abs(self.death - self.birth)

    def diagonal_gap(self) -> float:
        """L-infinity distance to the diagonal, |death - birth| / 2."""
        if math.isinf(self.death):
            return _INF
        return abs(self.death - self.birth) / 2.0


@dataclass
class PersistenceDiagram:
    """A multiset of persistence pairs.

    ``orientation`` records the filtration convention: "sublevel" for
    ordinary filtrations (death >= birth) and "upper" for density
    diagrams where births are the larger function values.
    """

    pairs: list[PersistencePair] = field(default_factory=list)
    orientation: str = "sublevel"

    def __post_init__(self) -> None:
        if self.orientation not in ("sublevel", "upper"):
            raise ConfigError(f"unknown orientation {self.orientation!r}")
        self.pairs = sorted(
            self.pairs, key=lambda p: (p.dim, p.birth, p.death, not p.essential)
        )

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def in_dim(self, p: int) -> list[PersistencePair]:
        return [pair for pair in self.pairs if pair.dim == p]

    def finite_pairs(self) -> list[PersistencePair]:
        return [pair for pair in self.pairs if not pair.essential]

    def essential_pairs(self) -> list[PersistencePair]:
        return [pair for pair in self.pairs if pair.essential]

    def dims(self) -> list[int]:
        return sorted({pair.dim for pair in self.pairs})

    def restricted(self, dims: set[int]) -> "PersistenceDiagram":
        return PersistenceDiagram(
            [p for p in self.pairs if p.dim in dims], orientation=self.orientation
        )

    def save_csv(self, path: str) -> None:
        """CSV with header dim,birth,death; essential deaths serialized as inf."""
        lines = ["dim,birth,death"]
        for p in self.pairs:
            death = "inf" if p.essential else repr(float(p.death))
            lines.append(f"{p.dim},{float(p.birth)!r},{death}")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load_csv(cls, path: str, orientation: str = "sublevel") -> "PersistenceDiagram":
        """Read a diagram CSV; leading ``#`` comment lines are metadata and skipped."""
        pairs = []
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            lineno = 1
            while header.startswith("#"):
                header = fh.readline().strip()
                lineno += 1
            if header != "dim,birth,death":
                raise ConfigError(f"bad diagram header in {path!r}: {header!r}")
            for lineno, line in enumerate(fh, start=lineno + 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    dim_s, birth_s, death_s = line.split(",")
                    pairs.append(
                        PersistencePair(int(dim_s), float(birth_s), float(death_s))
                    )
                except (ValueError, ConfigError) as exc:
                    raise ConfigError(f"{path}:{lineno}: {exc}") from exc
        return cls(pairs, orientation=orientation)


def _xor_merge(a: list[int], b: list[int]) -> list[int]:
    """Symmetric difference of two ascending index lists, ascending."""
    out: list[int] = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        x, y = a[i], b[j]
        if x == y:
            i += 1
            j += 1
        elif x < y:
            out.append(x)
            i += 1
        else:
            out.append(y)
            j += 1
    if i < na:
        out.extend(a[i:])
    if j < nb:
        out.extend(b[j:])
    return out


def reduce(filtration: Filtration, keep_zero: bool = False) -> PersistenceDiagram:
    """Reduce a filtration's Z2 boundary matrix to a persistence diagram.

    Args:
        filtration: A face-closed filtration in valid order.
        keep_zero: Retain pairs with birth == death. Off by default since
            such classes are invisible in the diagram metric.

    Returns:
        The diagram over all simplex dimensions present, with essential
        classes at death = inf.

    Raises:
        ConfigError: if some face is missing or enters after its coface.
    """
    sims = filtration.simplices
    position: dict[tuple[int, ...], int] = {}
    for idx, (s, _) in enumerate(sims):
        position[s.vertices] = idx
    m = len(sims)
    reduced: dict[int, list[int]] = {}
    low_owner: dict[int, int] = {}
    pair_of: dict[int, int] = {}
    positive: list[int] = []
    for j, (s, v) in enumerate(sims):
        col: list[int] = []
        for f in s.faces():
            p = position.get(f.vertices)
            if p is None:
                raise ConfigError(f"face {f.vertices} of {s.vertices} missing from filtration")
            if p > j:
                raise ConfigError(f"face {f.vertices} enters after coface {s.vertices}")
            col.append(p)
        col.sort()
        while col:
            low = col[-1]
            owner = low_owner.get(low)
            if owner is None:
                break
            col = _xor_merge(col, reduced[owner])
        if col:
            low = col[-1]
            low_owner[low] = j
            reduced[j] = col
            pair_of[low] = j
        else:
            positive.append(j)
    pairs: list[PersistencePair] = []
    for i in positive:
        s, birth = sims[i]
        j = pair_of.get(i)
        if j is None:
            pairs.append(PersistencePair(s.dim, birth, _INF))
        else:
            death = sims[j][1]
            if keep_zero or death > birth:
                pairs.append(PersistencePair(s.dim, birth, death))
    return PersistenceDiagram(pairs)


def _gf2_rank(columns: list[int]) -> int:
    """Rank over Z2 of a matrix given as column bitmasks."""
    pivot: dict[int, int] = {}
    rank = 0
    for col in columns:
        c = col
        while c:
            msb = c.bit_length() - 1
            if msb in pivot:
                c ^= pivot[msb]
            else:
                pivot[msb] = c
                rank += 1
                break
    return rank


def betti_at(filtration: Filtration, value: float, p: int) -> int:
    """Betti number of the sublevel subcomplex at the given value.

    Computes rank H_p = n_p - rank(boundary_p) - rank(boundary_{p+1}) by
    Gaussian elimination over Z2. Independent of the reduction algorithm,
    so it serves as its oracle.
    """
    if p < 0:
        raise ConfigError(f"negative homology dimension {p}")
    sub = [(s, v) for s, v in filtration.simplices if v <= value]
    index_in_dim: dict[tuple[int, ...], int] = {}
    count_in_dim: dict[int, int] = {}
    for s, _ in sub:
        if s.dim in (p - 1, p):
            index_in_dim[s.vertices] = count_in_dim.get(s.dim, 0)
            count_in_dim[s.dim] = count_in_dim.get(s.dim, 0) + 1
    n_p = count_in_dim.get(p, 0)
    if n_p == 0:
        return 0

    def boundary_columns(dim: int) -> list[int]:
        cols = []
        for s, _ in sub:
            if s.dim != dim:
                continue
            mask = 0
            for f in s.faces():
                mask |= 1 << index_in_dim[f.vertices]
            cols.append(mask)
        return cols

    rank_dp = _gf2_rank(boundary_columns(p)) if p >= 1 else 0
    rank_dp1 = _gf2_rank(boundary_columns(p + 1))
    return n_p - rank_dp - rank_dp1


def total_persistence(
    diagram: PersistenceDiagram, degree: float, threshold: float = 0.0
) -> float:
    """Degree-weighted total persistence of the finite part of a diagram.

    Sums 2 * gap^degree over finite pairs whose diagonal gap
    |death - birth| / 2 strictly exceeds ``threshold``.
    """
    if not (degree > 0):
        raise ConfigError(f"degree must be positive, got {degree}")
    if threshold < 0:
        raise ConfigError(f"threshold must be non-negative, got {threshold}")
    total = 0.0
    for pair in diagram.finite_pairs():
        gap = pair.diagonal_gap()
        if gap > threshold:
            total += 2.0 * gap**degree
    return total


def rips_diagram(
    cloud: PointCloud,
    max_scale: float,
    max_dim: int = 2,
    engine: str = "auto",
) -> PersistenceDiagram:
    """Persistence diagram of a Rips filtration, for homology below max_dim.

    Classes of dimension equal to ``max_dim`` are artifacts of the
    dimension cutoff (nothing above exists to kill them) and are dropped.
    With ``max_dim`` 0 the 0-dimensional classes are kept as is.

    The streaming engine computes the same diagram as reducing
    ``rips_filtration`` directly, but only materializes edges, so it
    scales to thousands of points at max_dim 2.
    """
    if engine not in ("auto", "reference", "streaming"):
        raise ConfigError(f"unknown engine {engine!r}")
    use_fast = engine == "streaming" or (
        engine == "auto" and max_dim == 2 and cloud.n >= 64
    )
    if use_fast and max_dim == 2:
        from ._fast import streaming_rips_pairs

        rows = streaming_rips_pairs(
            np.ascontiguousarray(cloud.points), float(max_scale)
        )
        pairs = [
            PersistencePair(int(d), float(b), _INF if math.isinf(dd) else float(dd))
            for d, b, dd in rows
            if math.isinf(dd) or dd > b
        ]
        return PersistenceDiagram(pairs)
    filtration = rips_filtration(cloud, max_scale, max_dim)
    keep = set(range(max_dim)) if max_dim > 0 else {0}
    return reduce(filtration).restricted(keep)
