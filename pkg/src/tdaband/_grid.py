"""Regular-grid scalar fields.

GridField is the shared currency between the density estimators, the
lower-star filtration builder, and the sup-norm metric. It lives in this
private module so that those modules can import it without cycles; the
public home of the type is ``tdaband.density``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class GridField:
    """A scalar function sampled on a regular grid over a box.

    Attributes:
        box: Per-axis (lo, hi) bounds, one pair per dimension.
        resolution: Number of grid vertices per axis, each at least 2.
        values: Array of shape ``resolution`` holding the vertex values.
    """

    box: tuple[tuple[float, float], ...]
    resolution: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        res = tuple(int(r) for r in self.resolution)
        if len(box) != len(res) or not box:
            raise ConfigError("box and resolution must describe the same positive dimension")
        for lo, hi in box:
            if not (lo < hi) or not np.isfinite([lo, hi]).all():
                raise ConfigError(f"degenerate axis bounds ({lo}, {hi})")
        for r in res:
            if r < 2:
                raise ConfigError("resolution must be >= 2 per axis")
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != res:
            raise ConfigError(f"values shape {values.shape} does not match resolution {res}")
        if not np.isfinite(values).all():
            raise ConfigError("grid values must be finite")
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "resolution", res)
        object.__setattr__(self, "values", values)

    @property
    def ndim(self) -> int:
        return len(self.resolution)

    @property
    def size(self) -> int:
        """Total number of grid vertices, the N of the grid band bound."""
        return int(np.prod(self.resolution))

    def axes(self) -> list[np.ndarray]:
        """Per-axis vertex coordinate arrays."""
        return [
            np.linspace(lo, hi, r)
            for (lo, hi), r in zip(self.box, self.resolution)
        ]

    def grid_points(self) -> np.ndarray:
        """All vertex coordinates as an (N, D) array in row-major vertex order."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def negate(self) -> "GridField":
        """The field with all values negated, used for upper-level-set filtrations."""
        return GridField(self.box, self.resolution, -self.values)

    @classmethod
    def geometry(
        cls, box: tuple[tuple[float, float], ...], resolution: tuple[int, ...]
    ) -> "GridField":
        """An all-zero field carrying only the grid geometry."""
        res = tuple(int(r) for r in resolution)
        return cls(tuple(box), res, np.zeros(res))

    def same_geometry(self, other: "GridField") -> bool:
        return self.box == other.box and self.resolution == other.resolution

    def with_values(self, values: np.ndarray) -> "GridField":
        return GridField(self.box, self.resolution, np.asarray(values, dtype=np.float64))

    def save_csv(self, path: str) -> None:
        """Write the geometry header line, then the values row-major, one per line."""
        header = ";".join(
            f"{lo!r},{hi!r},{r}" for (lo, hi), r in zip(self.box, self.resolution)
        )
        lines = [header]
        lines.extend(repr(float(v)) for v in self.values.ravel())
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load_csv(cls, path: str) -> "GridField":
        with open(path, "r", encoding="utf-8") as fh:
            raw = [line.strip() for line in fh if line.strip()]
        if not raw:
            raise ConfigError(f"empty grid file {path!r}")
        box = []
        res = []
        for axis in raw[0].split(";"):
            parts = axis.split(",")
            if len(parts) != 3:
                raise ConfigError(f"malformed grid header in {path!r}")
            box.append((float(parts[0]), float(parts[1])))
            res.append(int(parts[2]))
        values = np.array([float(v) for v in raw[1:]], dtype=np.float64)
        return cls(tuple(box), tuple(res), values.reshape(tuple(res)))
