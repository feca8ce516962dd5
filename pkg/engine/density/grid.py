"""Uniform LLR grid and the quantized density value type."""

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from config import SETTINGS
from errors import GridMismatchError

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class DensityGrid:
    grid_min: float = SETTINGS.grid.grid_min
    grid_max: float = SETTINGS.grid.grid_max
    bins: int = SETTINGS.grid.bins

    def __post_init__(self) -> None:
        if not self.grid_min < 0 < self.grid_max:
            raise GridMismatchError(f"grid [{self.grid_min}, {self.grid_max}] must straddle 0")
        if self.bins < 3:
            raise GridMismatchError("grid needs at least 3 bins")

    @property
    def delta(self) -> float:
        return (self.grid_max - self.grid_min) / (self.bins - 1)

    @property
    def centers(self) -> np.ndarray:
        return self.grid_min + self.delta * np.arange(self.bins)

    @property
    def zero_index(self) -> int:
        """Index of the bin containing LLR 0."""
        return int(np.clip(np.rint(-self.grid_min / self.delta), 0, self.bins - 1))

    def index_of(self, values: np.ndarray) -> np.ndarray:
        """Nearest-bin index, saturating at both ends."""
        idx = np.rint((np.asarray(values, dtype=np.float64) - self.grid_min) / self.delta)
        return np.clip(idx, 0, self.bins - 1).astype(np.int64)


DEFAULT_GRID = DensityGrid()


@dataclass(frozen=True, eq=False)
class QuantizedDensity:
    """Probability mass on a DensityGrid; endpoint bins hold saturated mass."""

    grid: DensityGrid
    mass: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        mass = np.asarray(self.mass, dtype=np.float64)
        if mass.shape != (self.grid.bins,):
            raise GridMismatchError(f"mass has shape {mass.shape}, grid has {self.grid.bins} bins")
        if np.any(mass < -NORMALIZATION_TOL):
            raise ValueError("density mass must be non-negative")
        total = mass.sum()
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"density mass sums to {total!r}, expected 1")
        mass = np.clip(mass, 0.0, None)
        mass.flags.writeable = False
        object.__setattr__(self, "mass", mass)

    @classmethod
    def normalized(cls, grid: DensityGrid, weights: np.ndarray) -> "QuantizedDensity":
        weights = np.asarray(weights, dtype=np.float64)
        return cls(grid, weights / weights.sum())

    @classmethod
    def point_mass(cls, grid: DensityGrid, value: float) -> "QuantizedDensity":
        mass = np.zeros(grid.bins)
        mass[grid.index_of(value)] = 1.0
        return cls(grid, mass)

    @classmethod
    def perfect(cls, grid: DensityGrid = DEFAULT_GRID) -> "QuantizedDensity":
        return cls.point_mass(grid, grid.grid_max)

    @classmethod
    def erasure(cls, grid: DensityGrid = DEFAULT_GRID) -> "QuantizedDensity":
        return cls.point_mass(grid, 0.0)

    @classmethod
    def from_samples(cls, grid: DensityGrid, llrs: np.ndarray) -> "QuantizedDensity":
        counts = np.bincount(grid.index_of(np.ravel(llrs)), minlength=grid.bins)
        return cls.normalized(grid, counts)

    def require_same_grid(self, other: "QuantizedDensity") -> None:
        if self.grid != other.grid:
            raise GridMismatchError(f"grid mismatch: {self.grid} vs {other.grid}")

    def mean(self) -> float:
        return float(np.dot(self.grid.centers, self.mass))

    def same_mass(self, other: "QuantizedDensity") -> bool:
        return self.grid == other.grid and np.array_equal(self.mass, other.mass)

    def to_dict(self) -> dict[str, Any]:
        return {
            "grid_min": self.grid.grid_min,
            "grid_max": self.grid.grid_max,
            "bins": self.grid.bins,
            "mass": self.mass.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "QuantizedDensity":
        grid = DensityGrid(float(data["grid_min"]), float(data["grid_max"]), int(data["bins"]))
        return cls(grid, np.asarray(data["mass"], dtype=np.float64))

    @classmethod
    def from_json(cls, text: str) -> "QuantizedDensity":
        return cls.from_dict(json.loads(text))


def require_common_grid(densities: Sequence[QuantizedDensity]) -> DensityGrid:
    grid = densities[0].grid
    for d in densities[1:]:
        if d.grid != grid:
            raise GridMismatchError(f"grid mismatch: {grid} vs {d.grid}")
    return grid
