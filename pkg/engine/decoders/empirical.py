"""Empirical LLR histograms at the semipolarized inputs of inner codes.

Inner codes are decoded alone (outer graph detached) on all-zero
codewords; after t BP iterations the leftward LLR at every semipolarized
input is binned on the density grid.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from config import SETTINGS
from decoders.bp import BpState
from density.channel import ChannelModel
from density.grid import DEFAULT_GRID, DensityGrid, QuantizedDensity
from errors import IndexRangeError, LengthMismatchError
from sim.channel import seeded_rng, transmit

logger = logging.getLogger(__name__)

Key = tuple[int, int]


@dataclass(frozen=True, eq=False)
class EmpiricalHistogramSet:
    """Histograms keyed by (block, inner index), both 1-based."""

    t: int
    sample_count: int
    histograms: dict[Key, QuantizedDensity] = field(repr=False)

    def __post_init__(self) -> None:
        if self.sample_count < SETTINGS.decoder.histogram_min_frames:
            raise ValueError(f"sample_count {self.sample_count} below the configured minimum")
        if not self.histograms:
            raise LengthMismatchError("histogram set is empty")

    def __len__(self) -> int:
        return len(self.histograms)

    @property
    def grid(self) -> DensityGrid:
        return next(iter(self.histograms.values())).grid

    def density(self, block: int, inner: int) -> QuantizedDensity:
        try:
            return self.histograms[(block, inner)]
        except KeyError:
            raise IndexRangeError(f"no histogram for inner code {block}, input {inner}") from None

    def initials(self, connection) -> list[QuantizedDensity]:
        """Densities a_1^i = b^{H(i)} in outer position order."""
        if connection.N0 != len(self):
            raise LengthMismatchError(f"{len(self)} histograms for N0={connection.N0}")
        return [self.density(*connection.image(p)) for p in range(1, connection.N0 + 1)]

    def to_dict(self) -> dict[str, Any]:
        grid = self.grid
        return {
            "t": self.t,
            "sample_count": self.sample_count,
            "grid_min": grid.grid_min,
            "grid_max": grid.grid_max,
            "bins": grid.bins,
            "histograms": [
                {"block": b, "index": i, "mass": d.mass.tolist()}
                for (b, i), d in sorted(self.histograms.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EmpiricalHistogramSet":
        grid = DensityGrid(float(data["grid_min"]), float(data["grid_max"]), int(data["bins"]))
        histograms = {
            (int(h["block"]), int(h["index"])): QuantizedDensity(grid, np.asarray(h["mass"], dtype=np.float64))
            for h in data["histograms"]
        }
        return cls(t=int(data["t"]), sample_count=int(data["sample_count"]), histograms=histograms)

    @classmethod
    def from_json(cls, text: str) -> "EmpiricalHistogramSet":
        return cls.from_dict(json.loads(text))


def leftward_llrs(
    llrs: np.ndarray,
    frozen_mask: np.ndarray,
    positions: np.ndarray,
    t: int,
) -> np.ndarray:
    """Leftward LLRs at 0-based leftmost ``positions`` after t BP iterations."""
    state = BpState.from_channel(llrs, frozen_mask, t)
    for _ in range(t):
        state.leftward()
        state.rightward()
    return state.left[0][..., positions]


def histogram_batch(
    block_frozen: np.ndarray,
    block_positions: Sequence[np.ndarray],
    model: ChannelModel,
    t: int,
    frames: int,
    seed: int,
    batch_index: int,
    grid: DensityGrid = DEFAULT_GRID,
) -> np.ndarray:
    """Bin counts of shape (M, |H|, bins) for one batch of all-zero frames."""
    M, N = block_frozen.shape
    counts = np.zeros((M, len(block_positions[0]), grid.bins), dtype=np.int64)
    for m in range(M):
        rng = seeded_rng(seed, m, batch_index)
        llrs = transmit(np.zeros((frames, N), dtype=np.uint8), model, rng)
        values = leftward_llrs(llrs, block_frozen[m], block_positions[m], t)
        idx = grid.index_of(values)
        for j in range(idx.shape[1]):
            counts[m, j] = np.bincount(idx[:, j], minlength=grid.bins)
    return counts


def batch_sizes(frames: int, batch_size: int) -> list[int]:
    full, rest = divmod(frames, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def collect_empirical_llrs(
    code,
    t: int,
    frames: int,
    model: ChannelModel,
    seed: int,
    batch_size: Optional[int] = None,
    grid: DensityGrid = DEFAULT_GRID,
    pool=None,
) -> EmpiricalHistogramSet:
    """Histogram set for every semipolarized input of every inner code.

    ``code`` is a concatenated code (anything exposing ``layouts``) or an
    InnerLayout. Batches are keyed by (seed, block, batch index), so the
    result does not depend on the batch schedule of ``pool``.
    """
    if t < 1 or t > SETTINGS.decoder.max_iters:
        raise IndexRangeError(f"t={t} outside 1..{SETTINGS.decoder.max_iters}")
    if frames < 1:
        raise IndexRangeError("frames must be at least 1")
    layouts = _layouts_of(code)
    if len({len(lay.semipolarized) for lay in layouts}) != 1:
        raise LengthMismatchError("inner codes carry different numbers of semipolarized inputs")
    block_frozen = np.stack([lay.frozen_mask for lay in layouts])
    positions = [lay.semipolarized_positions for lay in layouts]
    sizes = batch_sizes(frames, batch_size or SETTINGS.simulation.batch_size * 16)

    tasks = [(block_frozen, positions, model, t, size, seed, b, grid) for b, size in enumerate(sizes)]
    if pool is None:
        parts = [histogram_batch(*task) for task in tasks]
    else:
        parts = pool.run_all(histogram_batch, tasks)
    counts = np.sum(parts, axis=0)

    histograms: dict[Key, QuantizedDensity] = {}
    for m, layout in enumerate(layouts, start=1):
        for j, index in enumerate(layout.semipolarized):
            histograms[(m, index)] = QuantizedDensity.normalized(grid, counts[m - 1, j])
    logger.info("Collected LLR histograms: %d inputs, t=%d, %d frames per block", len(histograms), t, frames)
    return EmpiricalHistogramSet(t=t, sample_count=frames, histograms=histograms)


def _layouts_of(code) -> tuple:
    layouts = getattr(code, "layouts", None)
    if layouts is None:
        return (code,)
    return tuple(layouts() if callable(layouts) else layouts)
