"""Connection maps between outer codeword positions and inner semipolarized inputs."""

import logging
from functools import cached_property
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from errors import IndexRangeError, LengthMismatchError, PartitionError, SwapSafetyError

logger = logging.getLogger(__name__)


class Link(BaseModel):
    """Outer position ``outer`` feeds input ``inner`` of inner code ``block`` (all 1-based)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    outer: int
    block: int
    inner: int


class ConnectionMap(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    links: tuple[Link, ...]

    @model_validator(mode="after")
    def _bijective(self) -> "ConnectionMap":
        outers = sorted(link.outer for link in self.links)
        if outers != list(range(1, len(self.links) + 1)):
            raise PartitionError("every outer position 1..N0 must be used exactly once")
        targets = {(link.block, link.inner) for link in self.links}
        if len(targets) != len(self.links):
            raise PartitionError("two outer positions share an inner input")
        if any(link.block < 1 or link.inner < 1 for link in self.links):
            raise IndexRangeError("blocks and inner indices are 1-based")
        return self

    @classmethod
    def from_triples(cls, triples: Sequence[Sequence[int]]) -> "ConnectionMap":
        return cls(links=tuple(Link(outer=o, block=b, inner=i) for o, b, i in triples))

    @property
    def N0(self) -> int:
        return len(self.links)

    @property
    def blocks(self) -> int:
        return max(link.block for link in self.links)

    @cached_property
    def lookup(self) -> dict[int, tuple[int, int]]:
        return {link.outer: (link.block, link.inner) for link in self.links}

    def image(self, outer: int) -> tuple[int, int]:
        """(block, inner index) fed by an outer position."""
        if outer in self.lookup:
            return self.lookup[outer]
        raise IndexRangeError(f"outer position {outer} is not mapped")

    def block_of(self, outer: int) -> int:
        return self.image(outer)[0]

    def outer_positions(self, block: int) -> tuple[int, ...]:
        return tuple(sorted(link.outer for link in self.links if link.block == block))

    def inner_indices(self, block: int) -> tuple[int, ...]:
        return tuple(sorted(link.inner for link in self.links if link.block == block))

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """0-based (block, inner) per 0-based outer position, for gathers and scatters."""
        ordered = sorted(self.links, key=lambda link: link.outer)
        blocks = np.array([link.block - 1 for link in ordered], dtype=np.int64)
        inners = np.array([link.inner - 1 for link in ordered], dtype=np.int64)
        return blocks, inners

    def to_triples(self) -> list[list[int]]:
        return [[link.outer, link.block, link.inner] for link in sorted(self.links, key=lambda link: link.outer)]


def natural_connection(
    outer_positions: Sequence[int],
    semipolarized: Sequence[int],
    block: int = 1,
) -> ConnectionMap:
    """i-th listed outer position to the i-th smallest semipolarized index."""
    if len(outer_positions) != len(semipolarized):
        raise LengthMismatchError(f"{len(outer_positions)} outer positions for {len(semipolarized)} inputs")
    pairs = zip(outer_positions, sorted(semipolarized))
    return ConnectionMap(links=tuple(Link(outer=o, block=block, inner=h) for o, h in pairs))


class Example1Partition(BaseModel):
    """Per inner code m (index m-1): K_{a_m} and P_{a_m} as ascending outer positions."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    K_a: tuple[tuple[int, ...], ...]
    P_a: tuple[tuple[int, ...], ...]

    @property
    def M(self) -> int:
        return len(self.K_a)

    def block_positions(self, block: int) -> tuple[int, ...]:
        return tuple(sorted(self.K_a[block - 1] + self.P_a[block - 1]))


def example1_partition(unfrozen: Sequence[int], N0: int, M: int = 2) -> Example1Partition:
    """K_{a_2} = first half of O, K_{a_1} = second half; P_{a_1}, P_{a_2} = halves of O^c."""
    if M != 2:
        raise PartitionError(f"the half-split layout is defined for M = 2, got M = {M}")
    O = sorted(set(int(i) for i in unfrozen))
    chosen = set(O)
    Oc = [i for i in range(1, N0 + 1) if i not in chosen]
    if len(O) % 2 or len(Oc) % 2:
        raise PartitionError(f"|O|={len(O)} and |O^c|={len(Oc)} must both be even")
    ho, hc = len(O) // 2, len(Oc) // 2
    return Example1Partition(
        K_a=(tuple(O[ho:]), tuple(O[:ho])),
        P_a=(tuple(Oc[:hc]), tuple(Oc[hc:])),
    )


def example1_connection(
    unfrozen: Sequence[int],
    N0: int,
    semipolarized: Sequence[Sequence[int]],
    M: int = 2,
) -> tuple[Example1Partition, ConnectionMap]:
    """Inner code m pairs its ascending semipolarized indices with ascending K_{a_m} u P_{a_m}."""
    partition = example1_partition(unfrozen, N0, M)
    if len(semipolarized) != M:
        raise LengthMismatchError(f"need semipolarized sets for {M} inner codes")
    links: list[Link] = []
    for block in range(1, M + 1):
        positions = partition.block_positions(block)
        inputs = sorted(semipolarized[block - 1])
        if len(inputs) != len(positions):
            raise LengthMismatchError(
                f"inner code {block} has {len(inputs)} semipolarized inputs for {len(positions)} outer positions"
            )
        links.extend(Link(outer=o, block=block, inner=h) for o, h in zip(positions, inputs))
    return partition, ConnectionMap(links=tuple(links))


def check_swap_safety(connection: ConnectionMap, swaps: Sequence[tuple[int, int]]) -> None:
    """Each (out, in) swap must stay within one inner code."""
    for out, into in swaps:
        if connection.block_of(out) != connection.block_of(into):
            raise SwapSafetyError(
                f"swap {out} -> {into} moves an information bit from inner code "
                f"{connection.block_of(out)} to {connection.block_of(into)}"
            )
