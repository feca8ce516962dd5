"""Check-node and variable-node convolutions of quantized densities."""

from functools import lru_cache

import numpy as np

from density.grid import DensityGrid, QuantizedDensity
from polar.llr import boxplus

# masses below this are skipped when pairing bins; they cannot move error_prob
MASS_FLOOR = 1e-300


@lru_cache(maxsize=4)
def _boxplus_table(grid: DensityGrid) -> np.ndarray:
    """Nearest-bin index of boxplus(c_i, c_j) for every pair of bin centres.

    The endpoint centres sit at the clamp, so boxplus treats them as
    saturated: an endpoint operand passes the other one through.
    """
    centers = grid.centers
    values = boxplus(centers[:, None], centers[None, :], limit=max(-grid.grid_min, grid.grid_max))
    table = grid.index_of(values).astype(np.int32)
    table.flags.writeable = False
    return table


def check_convolve(a: QuantizedDensity, b: QuantizedDensity) -> QuantizedDensity:
    """Density of the boxplus of independent a and b, deposited in the nearest bin."""
    a.require_same_grid(b)
    grid = a.grid
    ia = np.flatnonzero(a.mass > MASS_FLOOR)
    ib = np.flatnonzero(b.mass > MASS_FLOOR)
    targets = _boxplus_table(grid)[np.ix_(ia, ib)]
    weights = np.outer(a.mass[ia], b.mass[ib])
    mass = np.bincount(targets.ravel(), weights=weights.ravel(), minlength=grid.bins)
    return QuantizedDensity(grid, mass)


def var_convolve(a: QuantizedDensity, b: QuantizedDensity) -> QuantizedDensity:
    """Density of a + b; sums beyond the grid saturate into the endpoint bins."""
    a.require_same_grid(b)
    grid = a.grid
    full = np.convolve(a.mass, b.mass)
    # full[k] is the mass at centre index k - zero_index
    shift = grid.zero_index
    mass = full[shift: shift + grid.bins].copy()
    mass[0] += full[:shift].sum()
    mass[-1] += full[shift + grid.bins:].sum()
    return QuantizedDensity(grid, mass)
