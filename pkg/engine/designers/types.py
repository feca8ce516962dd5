"""Value types shared by the outer-code designers."""

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from errors import PartitionError


class DesignInput(BaseModel):
    """Reliability order Q, per-position g values, K0 and the swap count s."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    Q: tuple[int, ...]
    g_values: dict[int, int]
    K0: int = Field(ge=0)
    s: int = Field(ge=0)

    @model_validator(mode="after")
    def _check(self) -> "DesignInput":
        N0 = len(self.Q)
        if sorted(self.Q) != list(range(1, N0 + 1)):
            raise PartitionError("Q is not a permutation of 1..N0")
        if set(self.g_values) != set(self.Q):
            raise PartitionError("g must be defined on every position 1..N0")
        if self.K0 > N0 or self.s > self.K0:
            raise PartitionError(f"need 0 <= s <= K0 <= N0, got s={self.s} K0={self.K0} N0={N0}")
        return self


class UnfrozenSet(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    N0: int
    positions: tuple[int, ...]

    @model_validator(mode="after")
    def _check(self) -> "UnfrozenSet":
        if len(set(self.positions)) != len(self.positions):
            raise PartitionError("unfrozen set repeats a position")
        if any(not 1 <= p <= self.N0 for p in self.positions):
            raise PartitionError(f"unfrozen positions outside 1..{self.N0}")
        return self

    @property
    def K0(self) -> int:
        return len(self.positions)

    def as_set(self) -> frozenset[int]:
        return frozenset(self.positions)

    def complement(self) -> tuple[int, ...]:
        chosen = self.as_set()
        return tuple(i for i in range(1, self.N0 + 1) if i not in chosen)


class Iterate(BaseModel):
    """One step of the local-global fixed-point search."""

    model_config = ConfigDict(frozen=True)

    step: int
    positions: tuple[int, ...]
    objective: float


class DesignResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: str
    unfrozen: UnfrozenSet
    objective: Optional[float] = None
    swaps: tuple[tuple[int, int], ...] = ()
    history: tuple[Iterate, ...] = ()
    converged: Optional[bool] = None
    oscillating: Optional[bool] = None
    parameters: dict[str, Any] = {}

    def provenance(self) -> dict[str, Any]:
        return self.model_dump(mode="json", exclude={"unfrozen"}, exclude_none=True)
