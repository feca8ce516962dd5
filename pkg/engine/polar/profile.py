"""Code profiles: block length, unfrozen set and reliability order."""

import json
import logging
from typing import Any, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from errors import LengthMismatchError, PartitionError
from polar.core import as_bits, encode

logger = logging.getLogger(__name__)


class CodeProfile(BaseModel):
    """A polar code: N = 2^n, unfrozen set A (1-based) and order Q.

    ``reliability_order`` lists every position by descending reliability and
    ``unfrozen`` is the set of its first K entries. JSON field order is fixed.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(ge=0, le=24)
    N: int
    unfrozen: tuple[int, ...]
    reliability_order: tuple[int, ...]
    provenance: Optional[dict[str, Any]] = None

    @model_validator(mode="after")
    def _check_invariants(self) -> "CodeProfile":
        if self.N != 1 << self.n:
            raise PartitionError(f"N={self.N} is not 2^{self.n}")
        if sorted(self.reliability_order) != list(range(1, self.N + 1)):
            raise PartitionError("reliability_order is not a permutation of 1..N")
        if len(set(self.unfrozen)) != len(self.unfrozen):
            raise PartitionError("unfrozen set has repeated indices")
        K = len(self.unfrozen)
        if set(self.unfrozen) != set(self.reliability_order[:K]):
            raise PartitionError("unfrozen set differs from the top-K of the reliability order")
        return self

    @property
    def K(self) -> int:
        return len(self.unfrozen)

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def frozen(self) -> tuple[int, ...]:
        chosen = set(self.unfrozen)
        return tuple(i for i in range(1, self.N + 1) if i not in chosen)

    @property
    def info_positions(self) -> np.ndarray:
        """0-based unfrozen positions, ascending."""
        return np.array(sorted(self.unfrozen), dtype=np.int64) - 1

    @property
    def frozen_mask(self) -> np.ndarray:
        mask = np.ones(self.N, dtype=bool)
        mask[self.info_positions] = False
        return mask

    @classmethod
    def from_order(cls, order: Sequence[int], K: int, **extra: Any) -> "CodeProfile":
        order = tuple(int(i) for i in order)
        N = len(order)
        n = N.bit_length() - 1
        if K < 0 or K > N:
            raise PartitionError(f"K={K} outside 0..{N}")
        return cls(n=n, N=N, unfrozen=tuple(sorted(order[:K])), reliability_order=order, **extra)

    def with_unfrozen(self, unfrozen: Sequence[int], **extra: Any) -> "CodeProfile":
        """Same length, new unfrozen set; the order is re-ranked to keep A at its head."""
        chosen = {int(i) for i in unfrozen}
        if not chosen <= set(self.reliability_order):
            raise PartitionError("unfrozen positions outside 1..N")
        head = [i for i in self.reliability_order if i in chosen]
        tail = [i for i in self.reliability_order if i not in chosen]
        return type(self)(
            n=self.n,
            N=self.N,
            unfrozen=tuple(sorted(chosen)),
            reliability_order=tuple(head + tail),
            **extra,
        )

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", exclude_none=True), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CodeProfile":
        return cls.model_validate_json(text)


class SystematicProfile(BaseModel):
    """A profile encoded systematically with B = A."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    base: CodeProfile

    @property
    def systematic_positions(self) -> tuple[int, ...]:
        return tuple(sorted(self.base.unfrozen))


def _solve_triangular(info: np.ndarray, profile: CodeProfile) -> np.ndarray:
    """Solve x_A = u_A G[A, A] by back substitution.

    G[A, A] is unit lower triangular, so u_b is fixed by info_b and the
    already-known u_a with a > b whose index bits contain those of b.
    """
    positions = profile.info_positions
    u = np.zeros(info.shape[:-1] + (profile.N,), dtype=np.uint8)
    for col in range(len(positions) - 1, -1, -1):
        b = positions[col]
        later = positions[col + 1:]
        covering = later[(later & b) == b]
        acc = info[..., col].copy()
        if covering.size:
            acc ^= np.bitwise_xor.reduce(u[..., covering], axis=-1)
        u[..., b] = acc
    return u


def systematic_encode(info: Sequence[int] | np.ndarray, profile: SystematicProfile) -> tuple[np.ndarray, np.ndarray]:
    """Systematic encoding by double encoding; returns (x, u).

    x restricted to B equals ``info`` and u is zero on the frozen set.
    Positions in B are read in ascending order.
    """
    base = profile.base
    info = as_bits(info) if np.ndim(info) == 1 else np.asarray(info, dtype=np.uint8)
    if info.shape[-1] != base.K:
        raise LengthMismatchError(f"expected {base.K} information bits, got {info.shape[-1]}")
    positions = base.info_positions
    frozen = base.frozen_mask
    x = np.zeros(info.shape[:-1] + (base.N,), dtype=np.uint8)
    for _ in range(max(base.n, 1)):
        x[..., positions] = info
        u = encode(x, base.n)
        u[..., frozen] = 0
        x = encode(u, base.n)
        if np.array_equal(x[..., positions], info):
            return x, u
    logger.debug("double encoding did not settle for K=%d; solving directly", base.K)
    u = _solve_triangular(info, base)
    return encode(u, base.n), u
