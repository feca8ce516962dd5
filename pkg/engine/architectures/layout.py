"""Split of an inner code into information, semipolarized and frozen positions."""

from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from errors import IndexRangeError, PartitionError
from polar.profile import CodeProfile


class InnerLayout(BaseModel):
    """1-based position sets of one inner code; together they partition 1..N."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    N: int
    info: tuple[int, ...]
    semipolarized: tuple[int, ...]
    frozen: tuple[int, ...]

    @model_validator(mode="after")
    def _partition(self) -> "InnerLayout":
        parts = self.info + self.semipolarized + self.frozen
        if sorted(parts) != list(range(1, self.N + 1)):
            raise PartitionError("info, semipolarized and frozen sets do not partition 1..N")
        return self

    @property
    def frozen_mask(self) -> np.ndarray:
        """Frozen positions only; semipolarized positions are left open."""
        mask = np.zeros(self.N, dtype=bool)
        mask[np.array(self.frozen, dtype=np.int64) - 1] = True
        return mask

    @property
    def info_positions(self) -> np.ndarray:
        return np.array(self.info, dtype=np.int64) - 1

    @property
    def semipolarized_positions(self) -> np.ndarray:
        return np.array(self.semipolarized, dtype=np.int64) - 1

    def profile(self, order: Sequence[int]) -> CodeProfile:
        """Inner profile with the information set unfrozen."""
        n = self.N.bit_length() - 1
        return CodeProfile(n=n, N=self.N, unfrozen=self.info, reliability_order=tuple(order))


def select_semipolarized(inner: CodeProfile | Sequence[int], K_info: int, count: int) -> InnerLayout:
    """Q(1..K_info) carry information, the next ``count`` entries are semipolarized."""
    order = tuple(inner.reliability_order if isinstance(inner, CodeProfile) else inner)
    N = len(order)
    if K_info < 0 or count < 0 or K_info + count > N:
        raise IndexRangeError(f"K_info={K_info} plus count={count} exceeds N={N}")
    return InnerLayout(
        N=N,
        info=tuple(sorted(order[:K_info])),
        semipolarized=tuple(sorted(order[K_info: K_info + count])),
        frozen=tuple(sorted(order[K_info + count:])),
    )
