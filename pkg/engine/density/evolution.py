"""Density evolution over the natural-order SC decoding tree.

For G = F^{(x)n} the first split pairs positions k and k + N/2: the first
half of the bit-channels sees check(d[k], d[k+N/2]) and the second half
sees var(d[k], d[k+N/2]). Stationary DE and the nonstationary sweep share
this recursion, so identical initial densities give identical results.
"""

import hashlib
import json
import logging
from typing import Callable, Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from density.channel import ChannelModel, channel_density
from density.convolve import check_convolve, var_convolve
from density.grid import DEFAULT_GRID, DensityGrid, QuantizedDensity, require_common_grid
from errors import IndexRangeError, LengthMismatchError

logger = logging.getLogger(__name__)

MAX_DE_N = 12

Metric = Literal["error", "erasure"]


def error_prob(d: QuantizedDensity) -> float:
    """Mass strictly below 0 plus half the mass of the zero bin."""
    z = d.grid.zero_index
    return float(d.mass[:z].sum() + 0.5 * d.mass[z])


def erasure_prob(d: QuantizedDensity) -> float:
    return float(d.mass[d.grid.zero_index])


class ErrorProfile(BaseModel):
    """Per bit-channel P(A_i), index i-1 holding position i."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    values: tuple[float, ...]
    metric: Metric = "error"

    @field_validator("values")
    @classmethod
    def _probabilities(cls, values: tuple[float, ...]) -> tuple[float, ...]:
        if not values:
            raise ValueError("error profile is empty")
        # clip float round-off only
        clipped = tuple(min(max(float(v), 0.0), 1.0) for v in values)
        if any(abs(v - c) > 1e-9 for v, c in zip(values, clipped)):
            raise ValueError("error probabilities must lie in [0, 1]")
        return clipped

    @property
    def N(self) -> int:
        return len(self.values)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    def reliability_order(self) -> tuple[int, ...]:
        """1-based positions by ascending P(A_i); ties go to the lower index."""
        return tuple(int(k) + 1 for k in np.argsort(self.array, kind="stable"))

    def best(self, K: int) -> tuple[int, ...]:
        """The K most reliable positions, ascending."""
        if not 0 <= K <= self.N:
            raise IndexRangeError(f"K={K} outside 0..{self.N}")
        return tuple(sorted(self.reliability_order()[:K]))

    def objective(self, positions: Sequence[int]) -> float:
        """Sum of P(A_i) over 1-based ``positions``."""
        return float(sum(self.values[i - 1] for i in positions))

    def to_json(self) -> str:
        return json.dumps(list(self.values))


def _fingerprint(d: QuantizedDensity) -> bytes:
    return hashlib.blake2b(d.mass.tobytes(), digest_size=16).digest()


class _ConvolutionMemo:
    """Reuses results for repeated (op, a, b) triples with equal masses."""

    def __init__(self) -> None:
        self._cache: dict[tuple[str, bytes, bytes], QuantizedDensity] = {}
        self.hits = 0

    def apply(
        self,
        op: str,
        fn: Callable[[QuantizedDensity, QuantizedDensity], QuantizedDensity],
        a: QuantizedDensity,
        b: QuantizedDensity,
    ) -> QuantizedDensity:
        key = (op, _fingerprint(a), _fingerprint(b))
        if key in self._cache:
            self.hits += 1
            return self._cache[key]
        out = fn(a, b)
        self._cache[key] = out
        return out


def evolve(initials: Sequence[QuantizedDensity]) -> list[QuantizedDensity]:
    """Leftmost-stage densities of every bit-channel, in natural order."""
    N = len(initials)
    if N == 0 or N & (N - 1):
        raise LengthMismatchError(f"need 2^n initial densities, got {N}")
    if N.bit_length() - 1 > MAX_DE_N:
        raise IndexRangeError(f"n={N.bit_length() - 1} exceeds {MAX_DE_N} for full DE")
    require_common_grid(initials)
    memo = _ConvolutionMemo()

    def split(densities: list[QuantizedDensity]) -> list[QuantizedDensity]:
        if len(densities) == 1:
            return densities
        h = len(densities) // 2
        minus = [memo.apply("check", check_convolve, densities[k], densities[k + h]) for k in range(h)]
        plus = [memo.apply("var", var_convolve, densities[k], densities[k + h]) for k in range(h)]
        return split(minus) + split(plus)

    leaves = split(list(initials))
    logger.debug("DE over N=%d reused %d convolutions", N, memo.hits)
    return leaves


def _profile(densities: Sequence[QuantizedDensity], metric: Metric) -> ErrorProfile:
    measure = erasure_prob if metric == "erasure" else error_prob
    return ErrorProfile(values=tuple(measure(d) for d in densities), metric=metric)


def nde_sweep(
    initials: Sequence[QuantizedDensity],
    n0: int | None = None,
    metric: Metric = "error",
) -> ErrorProfile:
    """DE with position-dependent initial densities on the rightmost stage."""
    if n0 is not None and len(initials) != 1 << n0:
        raise LengthMismatchError(f"expected {1 << n0} initial densities, got {len(initials)}")
    return _profile(evolve(initials), metric)


def de_construct(model: ChannelModel, n: int, grid: DensityGrid = DEFAULT_GRID) -> ErrorProfile:
    """Stationary DE: every rightmost position starts from the channel density."""
    if not 0 <= n <= MAX_DE_N:
        raise IndexRangeError(f"n={n} outside 0..{MAX_DE_N} for full DE")
    d = channel_density(model, grid)
    metric: Metric = "erasure" if model.is_erasure else "error"
    profile = nde_sweep([d] * (1 << n), n, metric)
    logger.info("DE construction: %s channel, N=%d", model.kind, 1 << n)
    return profile
